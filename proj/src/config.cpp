#include "maslov/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "maslov/errors.hpp"

namespace maslov {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  raise(ErrorCode::ConfigError, where + ": " + what);
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(where, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.count(key)) bad(where, "unknown key '" + key + "'");
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->template get<T>();
  } catch (const json::exception&) {
    bad(where + "." + key, "wrong type");
  }
}

RealMatrix identity_scaled(int m, double v) {
  RealMatrix out(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m), 0.0));
  for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = v;
  return out;
}

Mat to_mat(const RealMatrix& re, const RealMatrix& im, int m, const std::string& where) {
  auto check = [&](const RealMatrix& a, const char* part) {
    if (static_cast<int>(a.size()) != m) bad(where, std::string(part) + " must have " + std::to_string(m) + " rows");
    for (const auto& row : a)
      if (static_cast<int>(row.size()) != m) bad(where, std::string(part) + " must be square");
  };
  check(re, "real part");
  if (!im.empty()) check(im, "imaginary part");
  Mat out(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c)
      out(r, c) = cplx(re[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                       im.empty() ? 0.0 : im[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
  return out;
}

PotentialConfig parse_potential(const json& j, int default_m) {
  if (j.is_string()) return potential_shorthand(j.get<std::string>(), default_m);
  const std::string where = "potential";
  check_keys(j, where, {"kind", "m", "value_re", "value_im", "fourier_modes", "xs", "values_re", "values_im"});
  PotentialConfig p;
  read(j, "kind", p.kind, where);
  read(j, "m", p.m, where);
  read(j, "value_re", p.value_re, where);
  read(j, "value_im", p.value_im, where);
  read(j, "xs", p.xs, where);
  read(j, "values_re", p.values_re, where);
  read(j, "values_im", p.values_im, where);
  if (const auto it = j.find("fourier_modes"); it != j.end()) {
    if (!it->is_array()) bad(where + ".fourier_modes", "expected an array");
    for (const auto& mj : *it) {
      const std::string mw = where + ".fourier_modes[]";
      check_keys(mj, mw, {"k", "coeff_re", "coeff_im"});
      ModeConfig mode;
      read(mj, "k", mode.k, mw);
      read(mj, "coeff_re", mode.coeff_re, mw);
      read(mj, "coeff_im", mode.coeff_im, mw);
      p.fourier_modes.push_back(mode);
    }
  }
  return p;
}

json potential_json(const PotentialConfig& p) {
  json j{{"kind", p.kind}, {"m", p.m}};
  if (!p.value_re.empty()) j["value_re"] = p.value_re;
  if (!p.value_im.empty()) j["value_im"] = p.value_im;
  if (!p.fourier_modes.empty()) {
    j["fourier_modes"] = json::array();
    for (const auto& mode : p.fourier_modes) {
      json mj{{"k", mode.k}, {"coeff_re", mode.coeff_re}};
      if (!mode.coeff_im.empty()) mj["coeff_im"] = mode.coeff_im;
      j["fourier_modes"].push_back(mj);
    }
  }
  if (!p.xs.empty()) j["xs"] = p.xs;
  if (!p.values_re.empty()) j["values_re"] = p.values_re;
  if (!p.values_im.empty()) j["values_im"] = p.values_im;
  return j;
}

void in_range(const std::string& key, double v, double lo, double hi) {
  if (!(v >= lo && v <= hi)) {
    std::ostringstream os;
    os << "must lie in [" << lo << ", " << hi << "], got " << v;
    bad("numerics." + key, os.str());
  }
}

void positive(const std::string& key, double v) {
  if (!(v > 0.0)) bad("numerics." + key, "must be positive");
}

}  // namespace

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> cmds{"path", "verify-periodic-1d", "verify-robin-1d", "square", "band", "flow"};
  return cmds;
}

PotentialConfig potential_shorthand(const std::string& text, int m) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  auto number = [&](std::size_t i) {
    try {
      std::size_t used = 0;
      const double v = std::stod(parts.at(i), &used);
      if (used != parts[i].size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      bad("potential", "cannot read a number from '" + text + "'");
    }
  };
  PotentialConfig p;
  p.m = m;
  if (parts.size() == 2 && parts[0] == "const") {
    p.kind = "constant";
    p.value_re = identity_scaled(m, number(1));
    return p;
  }
  if ((parts.size() == 2 || parts.size() == 3) && parts[0] == "cos") {
    p.kind = "fourier";
    const double half = 0.5 * number(1);
    p.fourier_modes.push_back({{1}, identity_scaled(m, half), {}});
    p.fourier_modes.push_back({{-1}, identity_scaled(m, half), {}});
    if (parts.size() == 3) p.fourier_modes.push_back({{0}, identity_scaled(m, number(2)), {}});
    return p;
  }
  bad("potential", "unrecognized shorthand '" + text + "' (expected const:<v> or cos:<a>[:<c>])");
}

RunConfig parse_config(const json& j) {
  const std::string where = "config";
  check_keys(j, where,
             {"schema_version", "command", "scenario", "family", "potential", "cell", "theta1", "theta2", "tau", "lambda_inf",
              "verify_y19", "planes", "reference", "expected_index", "numerics", "output", "seed"});
  RunConfig c;
  read(j, "schema_version", c.schema_version, where);
  if (c.schema_version != kSchemaVersion) bad(where + ".schema_version", "unsupported version " + std::to_string(c.schema_version));
  read(j, "command", c.command, where);
  read(j, "scenario", c.scenario, where);
  read(j, "family", c.family, where);
  read(j, "theta1", c.theta1, where);
  read(j, "theta2", c.theta2, where);
  read(j, "tau", c.tau, where);
  read(j, "verify_y19", c.verify_y19, where);
  read(j, "planes", c.planes, where);
  read(j, "reference", c.reference, where);
  read(j, "seed", c.seed, where);
  if (const auto it = j.find("expected_index"); it != j.end()) {
    if (!it->is_number_integer()) bad(where + ".expected_index", "expected an integer");
    c.expected_index = it->get<int>();
  }
  if (const auto it = j.find("lambda_inf"); it != j.end()) {
    if (it->is_string()) {
      if (it->get<std::string>() != "auto") bad(where + ".lambda_inf", "expected a number or \"auto\"");
    } else if (it->is_number()) {
      c.lambda_inf = it->get<double>();
    } else {
      bad(where + ".lambda_inf", "expected a number or \"auto\"");
    }
  }
  if (const auto it = j.find("cell"); it != j.end()) {
    const std::string cw = "cell";
    check_keys(*it, cw, {"n", "basis_vectors", "theta"});
    CellConfig cell;
    read(*it, "n", cell.n, cw);
    read(*it, "basis_vectors", cell.basis_vectors, cw);
    read(*it, "theta", cell.theta, cw);
    c.cell = cell;
  }
  if (const auto it = j.find("potential"); it != j.end()) c.potential = parse_potential(*it, 1);
  if (const auto it = j.find("numerics"); it != j.end()) {
    const std::string nw = "numerics";
    check_keys(*it, nw,
               {"ode_steps", "oracle_grid", "oracle_count", "path_points", "sweep_points", "flow_points", "band_grid", "cutoff",
                "angle_tol", "max_depth", "tau_min", "zero_tol", "parallel", "record_timings"});
    auto& n = c.numerics;
    read(*it, "ode_steps", n.ode_steps, nw);
    read(*it, "oracle_grid", n.oracle_grid, nw);
    read(*it, "oracle_count", n.oracle_count, nw);
    read(*it, "path_points", n.path_points, nw);
    read(*it, "sweep_points", n.sweep_points, nw);
    read(*it, "flow_points", n.flow_points, nw);
    read(*it, "band_grid", n.band_grid, nw);
    read(*it, "cutoff", n.cutoff, nw);
    read(*it, "angle_tol", n.angle_tol, nw);
    read(*it, "max_depth", n.max_depth, nw);
    read(*it, "tau_min", n.tau_min, nw);
    read(*it, "zero_tol", n.zero_tol, nw);
    read(*it, "parallel", n.parallel, nw);
    read(*it, "record_timings", n.record_timings, nw);
  }
  if (const auto it = j.find("output"); it != j.end()) {
    const std::string ow = "output";
    check_keys(*it, ow, {"report", "tracks", "crossings"});
    read(*it, "report", c.output.report, ow);
    read(*it, "tracks", c.output.tracks, ow);
    read(*it, "crossings", c.output.crossings, ow);
  }
  validate(c);
  return c;
}

void validate(const RunConfig& c) {
  if (!c.command.empty() && std::find(known_commands().begin(), known_commands().end(), c.command) == known_commands().end())
    bad("config.command", "unknown command '" + c.command + "'");
  family_from_string(c.family);
  const auto& n = c.numerics;
  in_range("ode_steps", n.ode_steps, 64, 1 << 20);
  if (n.ode_steps % 2 != 0) bad("numerics.ode_steps", "must be even");
  in_range("oracle_grid", n.oracle_grid, 200, 200000);
  in_range("oracle_count", n.oracle_count, 1, 10000);
  in_range("path_points", n.path_points, 2, 100000);
  in_range("sweep_points", n.sweep_points, 2, 100000);
  in_range("flow_points", n.flow_points, 2, 100000);
  in_range("band_grid", n.band_grid, 2, 100000);
  in_range("cutoff", n.cutoff, 1, 128);
  in_range("max_depth", n.max_depth, 1, 60);
  positive("angle_tol", n.angle_tol);
  positive("tau_min", n.tau_min);
  positive("zero_tol", n.zero_tol);
  if (!(c.theta1 < c.theta2)) bad("config.theta1", "must be smaller than theta2");
  if (!(c.tau > 0.0 && c.tau < 1.0)) bad("config.tau", "must lie in (0, 1)");
  if (c.lambda_inf && !(*c.lambda_inf < 0.0)) bad("config.lambda_inf", "must be negative");
  if (c.potential) {
    const auto& p = *c.potential;
    if (p.kind != "constant" && p.kind != "fourier" && p.kind != "table") bad("potential.kind", "unknown kind '" + p.kind + "'");
    if (p.m < 1 || p.m > 4) bad("potential.m", "must lie in [1, 4]");
  }
  if (c.cell) {
    if (c.cell->n < 1 || c.cell->n > 3) bad("cell.n", "must lie in [1, 3]");
    if (static_cast<int>(c.cell->basis_vectors.size()) != c.cell->n || static_cast<int>(c.cell->theta.size()) != c.cell->n)
      bad("cell", "basis_vectors and theta must have n entries");
  }
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig c = parse_config_text(ss.str());
  const auto dir = std::filesystem::path(path).parent_path();
  for (std::string* input : {&c.planes, &c.reference})
    if (!input->empty() && std::filesystem::path(*input).is_relative()) *input = (dir / *input).string();
  return c;
}

json to_json(const RunConfig& c) {
  json j{{"schema_version", c.schema_version},
         {"command", c.command},
         {"scenario", c.scenario},
         {"family", c.family},
         {"theta1", c.theta1},
         {"theta2", c.theta2},
         {"tau", c.tau},
         {"verify_y19", c.verify_y19},
         {"planes", c.planes},
         {"reference", c.reference},
         {"seed", c.seed}};
  if (c.expected_index) j["expected_index"] = *c.expected_index;
  j["lambda_inf"] = c.lambda_inf ? json(*c.lambda_inf) : json("auto");
  if (c.potential) j["potential"] = potential_json(*c.potential);
  if (c.cell) j["cell"] = json{{"n", c.cell->n}, {"basis_vectors", c.cell->basis_vectors}, {"theta", c.cell->theta}};
  const auto& n = c.numerics;
  j["numerics"] = json{{"ode_steps", n.ode_steps},     {"oracle_grid", n.oracle_grid},   {"oracle_count", n.oracle_count},
                       {"path_points", n.path_points}, {"sweep_points", n.sweep_points}, {"flow_points", n.flow_points},
                       {"band_grid", n.band_grid},     {"cutoff", n.cutoff},             {"angle_tol", n.angle_tol},
                       {"max_depth", n.max_depth},     {"tau_min", n.tau_min},           {"zero_tol", n.zero_tol},
                       {"parallel", n.parallel},       {"record_timings", n.record_timings}};
  j["output"] = json{{"report", c.output.report}, {"tracks", c.output.tracks}, {"crossings", c.output.crossings}};
  return j;
}

Potential1D make_potential_1d(const PotentialConfig& p) {
  const int m = p.m;
  if (p.kind == "constant") return Potential1D::constant(to_mat(p.value_re, p.value_im, m, "potential.value"));
  if (p.kind == "fourier") {
    std::vector<Potential1D::Mode> modes;
    for (const auto& mode : p.fourier_modes) {
      if (mode.k.size() != 1) bad("potential.fourier_modes", "one-dimensional potentials need scalar mode indices");
      modes.push_back({mode.k[0], to_mat(mode.coeff_re, mode.coeff_im, m, "potential.fourier_modes")});
    }
    return Potential1D::fourier(m, modes);
  }
  if (p.kind == "table") {
    if (p.values_re.size() != p.xs.size()) bad("potential.values_re", "needs one matrix per abscissa");
    if (!p.values_im.empty() && p.values_im.size() != p.xs.size()) bad("potential.values_im", "needs one matrix per abscissa");
    std::vector<Mat> vals;
    for (std::size_t i = 0; i < p.xs.size(); ++i)
      vals.push_back(to_mat(p.values_re[i], p.values_im.empty() ? RealMatrix{} : p.values_im[i], m, "potential.values"));
    return Potential1D::table(p.xs, vals);
  }
  bad("potential.kind", "unknown kind '" + p.kind + "'");
}

FourierPotential make_fourier_potential(const PotentialConfig& p, int n) {
  if (p.kind == "constant") return FourierPotential::constant(n, to_mat(p.value_re, p.value_im, p.m, "potential.value"));
  if (p.kind != "fourier") bad("potential.kind", "band problems need a constant or Fourier potential");
  std::vector<FourierMode> modes;
  for (const auto& mode : p.fourier_modes) {
    if (static_cast<int>(mode.k.size()) != n) bad("potential.fourier_modes", "mode index length must equal the cell dimension");
    modes.push_back({mode.k, to_mat(mode.coeff_re, mode.coeff_im, p.m, "potential.fourier_modes")});
  }
  return FourierPotential(n, p.m, modes);
}

LatticeCell make_cell(const CellConfig& c) {
  RMat basis(c.n, c.n);
  RVec theta(c.n);
  for (int j = 0; j < c.n; ++j) {
    const auto& a = c.basis_vectors[static_cast<std::size_t>(j)];
    if (static_cast<int>(a.size()) != c.n) bad("cell.basis_vectors", "each vector needs n entries");
    for (int i = 0; i < c.n; ++i) basis(i, j) = a[static_cast<std::size_t>(i)];
    theta(j) = c.theta[static_cast<std::size_t>(j)];
  }
  return LatticeCell::create(basis, theta);
}

Verify1DConfig make_verify_config(const NumericsConfig& n) {
  Verify1DConfig v;
  v.ode_steps = n.ode_steps;
  v.oracle.grid = n.oracle_grid;
  v.oracle.count = n.oracle_count;
  v.maslov.angle_tol = n.angle_tol;
  v.maslov.max_depth = n.max_depth;
  v.maslov.parallel = n.parallel;
  v.path_points = n.path_points;
  v.sweep_points = n.sweep_points;
  return v;
}

BandOptions make_band_options(const NumericsConfig& n) {
  BandOptions b;
  b.grid_points = n.band_grid;
  b.zero_tol = n.zero_tol;
  b.tau_min = n.tau_min;
  b.parallel = n.parallel;
  b.ode_steps = n.ode_steps;
  return b;
}

ScenarioOptions make_scenario_options(const NumericsConfig& n) {
  ScenarioOptions s;
  const Verify1DConfig v = make_verify_config(n);
  s.ode_steps = v.ode_steps;
  s.oracle = v.oracle;
  s.maslov = v.maslov;
  s.path_points = v.path_points;
  s.flow_points = n.flow_points;
  s.band = make_band_options(n);
  s.record_timings = n.record_timings;
  return s;
}

}  // namespace maslov
