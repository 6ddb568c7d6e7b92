#include "maslov/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <stdexcept>

#include "maslov/report.hpp"

namespace maslov {

using nlohmann::json;

namespace {

struct Overrides {
  std::optional<std::string> config;
  std::optional<std::string> report;
  std::optional<std::string> tracks;
  std::optional<std::string> crossings;
  std::optional<std::string> scenario;
  std::optional<std::string> potential;
  std::optional<int> m;
  std::optional<std::string> family;
  std::optional<double> theta1;
  std::optional<double> theta2;
  std::optional<double> tau;
  std::optional<std::string> lambda_inf;
  std::optional<double> cell_theta;
  std::optional<std::string> planes;
  std::optional<std::string> reference;
  std::optional<int> expected_index;
  std::optional<int> ode_steps;
  std::optional<int> oracle_grid;
  std::optional<int> oracle_count;
  std::optional<int> path_points;
  std::optional<int> sweep_points;
  std::optional<int> flow_points;
  std::optional<int> band_grid;
  std::optional<int> cutoff;
  bool verify_y19 = false;
  bool no_verify_y19 = false;
  bool serial = false;
  bool record_timings = false;
};

void add_common(CLI::App& app, Overrides& o) {
  app.add_option("-c,--config", o.config, "JSON configuration file; inline flags override its values");
  app.add_option("-o,--report", o.report, "JSON report path (default: standard output)");
  app.add_option("--tracks", o.tracks, "CSV of eigenvalue tracks (t,j,lambda)");
  app.add_option("--crossings", o.crossings, "CSV of crossings");
  app.add_option("--scenario", o.scenario, "Scenario label copied into the report");
  app.add_option("--ode-steps", o.ode_steps, "RK4 steps for boundary traces");
  app.add_option("--oracle-grid", o.oracle_grid, "Finite-difference intervals of the coarse oracle grid");
  app.add_option("--oracle-count", o.oracle_count, "Eigenvalues requested from the oracle");
  app.add_option("--path-points", o.path_points, "Initial samples of each Lagrangian path");
  app.add_flag("--serial", o.serial, "Run the serial reference kernels");
  app.add_flag("--record-timings", o.record_timings, "Include wall-clock timings in the report");
}

void add_potential(CLI::App& app, Overrides& o) {
  app.add_option("--potential", o.potential, "const:<v> or cos:<a>[:<c>], times the identity");
  app.add_option("--m", o.m, "Matrix size of the potential")->check(CLI::Range(1, 4));
}

void add_window(CLI::App& app, Overrides& o) {
  app.add_option("--theta1,--alpha", o.theta1, "Start of the parameter window");
  app.add_option("--theta2,--beta", o.theta2, "End of the parameter window");
}

void add_band(CLI::App& app, Overrides& o) {
  app.add_option("--tau", o.tau, "Smallest scale of the scaled family");
  app.add_option("--cutoff", o.cutoff, "Plane-wave cutoff K");
  app.add_option("--theta", o.cell_theta, "Quasi-momentum of the one-dimensional unit cell");
  app.add_option("--band-grid", o.band_grid, "Uniform scale samples before refinement");
}

RunConfig resolve(const std::string& command, const Overrides& o) {
  RunConfig c = o.config ? load_config(*o.config) : RunConfig{};
  if (!command.empty()) c.command = command;
  if (c.command.empty()) raise(ErrorCode::ConfigError, "no command given on the command line or in the config");
  if (o.report) c.output.report = *o.report;
  if (o.tracks) c.output.tracks = *o.tracks;
  if (o.crossings) c.output.crossings = *o.crossings;
  if (o.scenario) c.scenario = *o.scenario;
  if (o.family) c.family = *o.family;
  if (o.theta1) c.theta1 = *o.theta1;
  if (o.theta2) c.theta2 = *o.theta2;
  if (o.tau) c.tau = *o.tau;
  if (o.lambda_inf) {
    if (*o.lambda_inf == "auto") {
      c.lambda_inf.reset();
    } else {
      try {
        std::size_t used = 0;
        c.lambda_inf = std::stod(*o.lambda_inf, &used);
        if (used != o.lambda_inf->size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        raise(ErrorCode::ConfigError, "--lambda-inf expects 'auto' or a number, got '" + *o.lambda_inf + "'");
      }
    }
  }
  if (o.planes) c.planes = *o.planes;
  if (o.reference) c.reference = *o.reference;
  if (o.expected_index) c.expected_index = *o.expected_index;
  if (o.potential) c.potential = potential_shorthand(*o.potential, o.m.value_or(c.potential ? c.potential->m : 1));
  if (o.cell_theta) {
    if (!c.cell) c.cell = CellConfig{};
    if (c.cell->n != 1) raise(ErrorCode::ConfigError, "--theta applies to one-dimensional cells only");
    c.cell->theta = {*o.cell_theta};
  }
  auto& n = c.numerics;
  if (o.ode_steps) n.ode_steps = *o.ode_steps;
  if (o.oracle_grid) n.oracle_grid = *o.oracle_grid;
  if (o.oracle_count) n.oracle_count = *o.oracle_count;
  if (o.path_points) n.path_points = *o.path_points;
  if (o.sweep_points) n.sweep_points = *o.sweep_points;
  if (o.flow_points) n.flow_points = *o.flow_points;
  if (o.band_grid) n.band_grid = *o.band_grid;
  if (o.cutoff) n.cutoff = *o.cutoff;
  if (o.serial) n.parallel = false;
  if (o.record_timings) n.record_timings = true;
  if (o.verify_y19) c.verify_y19 = true;
  if (o.no_verify_y19) c.verify_y19 = false;
  if (const char* env = std::getenv("MASLOV_SEED")) {
    try {
      c.seed = std::stoull(env);
    } catch (const std::exception&) {
      raise(ErrorCode::ConfigError, "MASLOV_SEED is not an unsigned integer");
    }
  }
  validate(c);
  return c;
}

const PotentialConfig& require_potential(const RunConfig& c) {
  if (!c.potential) raise(ErrorCode::ConfigError, "command '" + c.command + "' needs a potential");
  return *c.potential;
}

ScaledFamily band_family(const RunConfig& c) {
  const CellConfig cell = c.cell.value_or(CellConfig{});
  return ScaledFamily(make_cell(cell), make_fourier_potential(require_potential(c), cell.n));
}

struct Outcome {
  json result;
  bool pass = false;
  std::optional<EigenTracks> tracks;
  std::vector<CrossingReport> crossings;
};

Outcome run_path(const RunConfig& c) {
  if (c.planes.empty() || c.reference.empty()) raise(ErrorCode::ConfigError, "path needs --planes and --reference");
  const PlaneSamples samples = read_plane_samples_csv(c.planes);
  const Mat ref = read_plane_csv(c.reference);
  const int dim = static_cast<int>(ref.rows());
  if (samples.bases.front().rows() != dim) raise(ErrorCode::ConfigError, "reference and path planes live in different spaces");
  const SpacePtr space = standard_space(dim / 2);
  std::vector<LagrangianPlane> planes;
  for (const auto& b : samples.bases) planes.push_back(plane_from_basis(space, b));
  const LagrangianPath path = geodesic_path(samples.s, planes, c.numerics.path_points);
  MaslovOptions mo = make_verify_config(c.numerics).maslov;
  const MaslovResult r = maslov_index(path, plane_from_basis(space, ref), mo);
  Outcome out;
  out.result = to_json(r);
  out.pass = !c.expected_index || *c.expected_index == r.index;
  if (c.expected_index) out.result["expected_index"] = *c.expected_index;
  out.crossings = r.crossings;
  return out;
}

Outcome run_identity(const RunConfig& c, bool robin) {
  const Potential1D v = make_potential_1d(require_potential(c));
  const Verify1DConfig vc = make_verify_config(c.numerics);
  const IdentityReport r =
      robin ? verify_robin_monotone(v, c.theta1, c.theta2, vc) : verify_identity_rr15(v, c.theta1, c.theta2, vc);
  Outcome out;
  out.result = to_json(r);
  out.pass = r.pass;
  out.crossings = r.crossings;
  return out;
}

Outcome run_square_command(const RunConfig& c) {
  const FamilyKind kind = family_from_string(c.family);
  if (kind == FamilyKind::scaled_band) raise(ErrorCode::ConfigError, "square supports the one-dimensional families only");
  const ScenarioOptions so = make_scenario_options(c.numerics);
  auto square = make_square_1d(kind, make_potential_1d(require_potential(c)), c.theta1, c.theta2, c.lambda_inf, so);
  if (!c.scenario.empty()) square.id = c.scenario;
  const VerificationReport r = run_square(square, so);
  Outcome out;
  out.result = to_json(r);
  out.pass = r.pass;
  for (const auto& side : r.sides) out.crossings.insert(out.crossings.end(), side.crossings.begin(), side.crossings.end());
  return out;
}

Outcome run_band(const RunConfig& c) {
  const ScaledFamily family = band_family(c);
  const auto trunc = FourierTruncation::create(family.cell.dim(), family.potential.size(), c.numerics.cutoff);
  const BandOptions bo = make_band_options(c.numerics);
  Outcome out;
  if (c.verify_y19) {
    const Y19Report r = verify_y19(family, c.tau, trunc, bo);
    out.result = to_json(r);
    out.pass = r.pass;
    out.tracks = r.table.tracks;
  } else {
    const MorseTable table = morse_sweep(family, c.tau, trunc, bo);
    json rows = json::array();
    for (const auto& row : table.rows) rows.push_back(json{{"t", row.t}, {"morse", row.morse}});
    out.result = json{{"tau", c.tau}, {"morse_table", rows}};
    out.pass = true;
    out.tracks = table.tracks;
  }
  return out;
}

Outcome run_flow(const RunConfig& c) {
  FlowScenario f;
  f.id = c.scenario;
  f.family = family_from_string(c.family);
  f.theta1 = c.theta1;
  f.theta2 = c.theta2;
  f.tau = c.tau;
  f.cutoff = c.numerics.cutoff;
  if (f.family == FamilyKind::scaled_band)
    f.band = band_family(c);
  else
    f.potential = make_potential_1d(require_potential(c));
  const VerificationReport r = run_spectral_flow_identity(f, make_scenario_options(c.numerics));
  Outcome out;
  out.result = to_json(r);
  out.pass = r.pass;
  out.tracks = r.tracks;
  return out;
}

Outcome dispatch(const RunConfig& c) {
  if (c.command == "path") return run_path(c);
  if (c.command == "verify-periodic-1d") return run_identity(c, false);
  if (c.command == "verify-robin-1d") return run_identity(c, true);
  if (c.command == "square") return run_square_command(c);
  if (c.command == "band") return run_band(c);
  if (c.command == "flow") return run_flow(c);
  raise(ErrorCode::ConfigError, "unknown command '" + c.command + "'");
}

void emit_error(const std::string& command, const std::string& report_path, ErrorCode code, const std::string& message) {
  std::cerr << "maslov: " << to_string(code) << ": " << message << "\n";
  try {
    emit_report(error_envelope(command, code, message), report_path);
  } catch (const MaslovError& e) {
    std::cerr << "maslov: " << e.what() << "\n";
  }
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept { return is_config_error(code) ? kExitConfig : kExitNumerical; }

int execute(const RunConfig& config) {
  try {
    const Outcome out = dispatch(config);
    json report = report_envelope(config.command, out.pass, out.result);
    report["config"] = to_json(config);
    if (!config.output.tracks.empty()) {
      if (!out.tracks) raise(ErrorCode::ConfigError, "command '" + config.command + "' produces no eigenvalue tracks");
      emit_tracks(*out.tracks, config.output.tracks);
    }
    if (!config.output.crossings.empty()) emit_crossings(out.crossings, config.output.crossings);
    emit_report(report, config.output.report);
    return out.pass ? kExitPass : kExitFail;
  } catch (const MaslovError& e) {
    emit_error(config.command, config.output.report, e.code(), e.detail());
    return exit_code_for(e.code());
  }
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Maslov index and spectral-flow verification tool"};
  app.require_subcommand(0, 1);
  Overrides top;
  add_common(app, top);

  Overrides sub;
  std::vector<CLI::App*> subs;
  auto* path = app.add_subcommand("path", "Maslov index of a sampled plane path against a reference plane");
  add_common(*path, sub);
  path->add_option("--planes", sub.planes, "CSV of plane samples: s followed by re,im pairs per basis row");
  path->add_option("--reference", sub.reference, "CSV of the reference plane basis");
  path->add_option("--expect", sub.expected_index, "Fail (exit 1) unless the index equals this value");
  subs.push_back(path);

  for (const char* name : {"verify-periodic-1d", "verify-robin-1d"}) {
    auto* s = app.add_subcommand(name, std::string(name) == "verify-robin-1d"
                                           ? "Robin sweep: Morse difference, kernel count and crossing-form signs"
                                           : "Theta-periodic identity: Morse difference against the Maslov index");
    add_common(*s, sub);
    add_potential(*s, sub);
    add_window(*s, sub);
    s->add_option("--sweep-points", sub.sweep_points, "Parameter samples used to bracket kernel points");
    subs.push_back(s);
  }

  auto* square = app.add_subcommand("square", "Four-sided homotopy argument on [lambda_inf, 0] x [alpha, beta]");
  add_common(*square, sub);
  add_potential(*square, sub);
  add_window(*square, sub);
  square->add_option("--family", sub.family, "theta_sweep_1d or robin_sweep_1d");
  square->add_option("--lambda-inf", sub.lambda_inf, "Lower spectral bound: auto or a negative number");
  subs.push_back(square);

  auto* band = app.add_subcommand("band", "Morse index of the scaled periodic family and the small-scale identities");
  add_common(*band, sub);
  add_potential(*band, sub);
  add_band(*band, sub);
  band->add_flag("--verify-y19", sub.verify_y19, "Run the full small-scale verification");
  band->add_flag("--no-verify-y19", sub.no_verify_y19, "Only tabulate the Morse index");
  subs.push_back(band);

  auto* flow = app.add_subcommand("flow", "Spectral flow of eigenvalue tracks against the Maslov index");
  add_common(*flow, sub);
  add_potential(*flow, sub);
  add_window(*flow, sub);
  add_band(*flow, sub);
  flow->add_option("--family", sub.family, "theta_sweep_1d, robin_sweep_1d or scaled_band");
  flow->add_option("--flow-points", sub.flow_points, "Parameter samples of the eigenvalue tracks");
  subs.push_back(flow);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  std::string command;
  const Overrides* chosen = &top;
  for (auto* s : subs)
    if (s->parsed()) {
      command = s->get_name();
      chosen = &sub;
    }
  if (command.empty() && !top.config) {
    std::cerr << app.help();
    return kExitConfig;
  }
  Overrides merged = *chosen;
  if (chosen == &sub) {
    if (!merged.config) merged.config = top.config;
    if (!merged.report) merged.report = top.report;
  }

  RunConfig config;
  try {
    config = resolve(command, merged);
  } catch (const MaslovError& e) {
    emit_error(command, merged.report.value_or(""), e.code(), e.detail());
    return exit_code_for(e.code());
  }
  return execute(config);
}

}  // namespace maslov
