#pragma once

#include "maslov/config.hpp"
#include "maslov/errors.hpp"

namespace maslov {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitConfig = 2, kExitNumerical = 3 };

/// Exit code for a library error: configuration and input faults map to 2, numerical faults to 3.
int exit_code_for(ErrorCode code) noexcept;

/// Executes a resolved configuration, writes the report and any requested CSV files, and returns the exit code.
int execute(const RunConfig& config);

/// Parses argv (subcommand with inline flags, or a config file naming its own command) and calls execute.
int run_cli(int argc, const char* const* argv);

}  // namespace maslov
