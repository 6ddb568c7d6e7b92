#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "maslov/band.hpp"
#include "maslov/schrodinger1d.hpp"
#include "maslov/scenarios.hpp"
#include "maslov/verify1d.hpp"

namespace maslov {

inline constexpr int kSchemaVersion = 1;

using RealMatrix = std::vector<std::vector<double>>;

struct ModeConfig {
  std::vector<int> k;
  RealMatrix coeff_re;
  RealMatrix coeff_im;
  bool operator==(const ModeConfig&) const = default;
};

/// Potential description: "constant" (value_re/value_im), "fourier" (fourier_modes) or "table"
/// (xs with values_re/values_im, one-dimensional only).
struct PotentialConfig {
  std::string kind = "constant";
  int m = 1;
  RealMatrix value_re;
  RealMatrix value_im;
  std::vector<ModeConfig> fourier_modes;
  std::vector<double> xs;
  std::vector<RealMatrix> values_re;
  std::vector<RealMatrix> values_im;
  bool operator==(const PotentialConfig&) const = default;
};

struct CellConfig {
  int n = 1;
  /// One row per basis vector a_j.
  RealMatrix basis_vectors{{1.0}};
  std::vector<double> theta{0.0};
  bool operator==(const CellConfig&) const = default;
};

struct NumericsConfig {
  int ode_steps = 4096;
  int oracle_grid = 2000;
  int oracle_count = 8;
  int path_points = 17;
  int sweep_points = 41;
  int flow_points = 41;
  int band_grid = 200;
  int cutoff = 16;
  double angle_tol = 1e-9;
  int max_depth = 20;
  double tau_min = 1e-3;
  double zero_tol = 1e-9;
  bool parallel = true;
  bool record_timings = false;
  bool operator==(const NumericsConfig&) const = default;
};

struct OutputConfig {
  /// Empty report path means standard output.
  std::string report;
  std::string tracks;
  std::string crossings;
  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  /// path | verify-periodic-1d | verify-robin-1d | square | band | flow
  std::string command;
  std::string scenario;
  /// theta_sweep_1d | robin_sweep_1d | scaled_band, for square and flow.
  std::string family = "theta_sweep_1d";
  std::optional<PotentialConfig> potential;
  std::optional<CellConfig> cell;
  double theta1 = 0.0;
  double theta2 = kPi;
  double tau = 0.05;
  /// Absent means automatic.
  std::optional<double> lambda_inf;
  bool verify_y19 = true;
  std::string planes;
  std::string reference;
  /// path only: the run passes when the computed index equals this value.
  std::optional<int> expected_index;
  NumericsConfig numerics;
  OutputConfig output;
  std::uint64_t seed = 20240611ULL;
  bool operator==(const RunConfig&) const = default;
};

const std::vector<std::string>& known_commands();

/// Strict parse: unknown keys, wrong types and out-of-range numerics raise ConfigError naming the key.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text);
/// Relative plane-file paths inside the file are resolved against its directory.
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& c);
/// Checks ranges and cross-field requirements; called by parse_config and after flag overrides.
void validate(const RunConfig& c);

/// "const:<v>", "cos:<amplitude>[:<shift>]" for V = amplitude cos(2 pi x) + shift, scalar times I_m.
PotentialConfig potential_shorthand(const std::string& text, int m);

Potential1D make_potential_1d(const PotentialConfig& p);
FourierPotential make_fourier_potential(const PotentialConfig& p, int n);
LatticeCell make_cell(const CellConfig& c);

Verify1DConfig make_verify_config(const NumericsConfig& n);
ScenarioOptions make_scenario_options(const NumericsConfig& n);
BandOptions make_band_options(const NumericsConfig& n);

}  // namespace maslov
