#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "../support.hpp"
#include "maslov/cli.hpp"
#include "maslov/config.hpp"
#include "maslov/path.hpp"
#include "maslov/report.hpp"

using namespace maslov;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = fs::path(MASLOV_SOURCE_DIR) / "scenarios";
const fs::path kGolden = fs::path(MASLOV_SOURCE_DIR) / "tests" / "golden";

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("maslov_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "maslov");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

json load(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  return json::parse(in);
}

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const MaslovError& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    return e.what();
  }
  FAIL("expected a ConfigError for " << text);
  return {};
}

/// Structure, key sets, integers, booleans and strings must match exactly; floats to 1e-6 relative.
void compare_schema(const json& actual, const json& golden, const std::string& where) {
  INFO(where);
  if (golden.is_number_float() || actual.is_number_float()) {
    REQUIRE(actual.is_number());
    REQUIRE(golden.is_number());
    const double a = actual.get<double>(), g = golden.get<double>();
    CHECK(std::abs(a - g) <= 1e-6 * std::max(1.0, std::abs(g)));
    return;
  }
  REQUIRE(actual.type() == golden.type());
  if (golden.is_object()) {
    std::vector<std::string> ka, kg;
    for (const auto& [k, v] : actual.items()) ka.push_back(k);
    for (const auto& [k, v] : golden.items()) kg.push_back(k);
    REQUIRE(ka == kg);
    for (const auto& [k, v] : golden.items()) compare_schema(actual.at(k), v, where + "." + k);
  } else if (golden.is_array()) {
    REQUIRE(actual.size() == golden.size());
    for (std::size_t i = 0; i < golden.size(); ++i) compare_schema(actual[i], golden[i], where + "[" + std::to_string(i) + "]");
  } else {
    CHECK(actual == golden);
  }
}

/// Machine-specific paths are blanked before comparison.
json normalized(json report) {
  if (report.contains("config")) {
    report["config"]["output"] = json::object();
    report["config"]["planes"] = "";
    report["config"]["reference"] = "";
  }
  return report;
}

void check_golden(const std::string& name, const json& report) {
  const fs::path golden = kGolden / (name + ".json");
  if (std::getenv("MASLOV_UPDATE_GOLDEN")) {
    std::ofstream(golden) << normalized(report).dump(2) << "\n";
    return;
  }
  compare_schema(normalized(report), load(golden), name);
}

RunConfig random_config(testsupport::Random& rng, int i) {
  RunConfig c;
  c.command = known_commands()[static_cast<std::size_t>(i) % known_commands().size()];
  c.scenario = "case_" + std::to_string(i);
  c.family = i % 2 ? "robin_sweep_1d" : "theta_sweep_1d";
  c.theta1 = rng.uniform(-3.0, 0.0);
  c.theta2 = c.theta1 + rng.uniform(0.1, 4.0);
  c.tau = rng.uniform(0.01, 0.5);
  if (i % 3 == 0) c.lambda_inf = -rng.uniform(1.0, 100.0);
  if (i % 4 == 0) c.expected_index = i % 5 - 2;
  c.verify_y19 = i % 2 == 0;
  const int m = 1 + i % 2;
  if (i % 3 == 1) {
    c.potential = potential_shorthand("cos:" + std::to_string(rng.uniform(-5, 5)) + ":" + std::to_string(rng.uniform(-5, 5)), m);
  } else if (i % 3 == 2) {
    PotentialConfig p;
    p.m = m;
    p.value_re = RealMatrix(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m), rng.normal()));
    p.value_im = RealMatrix(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m), 0.0));
    c.potential = p;
  }
  if (i % 5 == 0) c.cell = CellConfig{1, {{rng.uniform(0.5, 2.0)}}, {rng.uniform(0.0, 1.0)}};
  c.numerics.ode_steps = 2 * (64 + static_cast<int>(rng.uniform(0, 4000)));
  c.numerics.oracle_grid = 200 + static_cast<int>(rng.uniform(0, 5000));
  c.numerics.angle_tol = std::pow(10.0, rng.uniform(-12, -6));
  c.numerics.zero_tol = rng.uniform(1e-12, 1e-6);
  c.numerics.parallel = i % 2 == 1;
  c.numerics.cutoff = 1 + i % 20;
  c.output.report = i % 2 ? "r.json" : "";
  c.output.tracks = i % 3 ? "t.csv" : "";
  c.seed = static_cast<std::uint64_t>(rng.uniform(0, 1e12));
  return c;
}

}  // namespace

TEST_SUITE("cli_io") {
  TEST_CASE("config round trip over random valid configs") {
    testsupport::Random rng(77);
    for (int i = 0; i < 300; ++i) {
      const RunConfig c = random_config(rng, i);
      validate(c);
      const RunConfig back = parse_config_text(to_json(c).dump());
      CHECK(back == c);
      CHECK(to_json(back) == to_json(c));
    }
  }

  TEST_CASE("every bundled scenario parses and round-trips") {
    int count = 0;
    for (const auto& entry : fs::directory_iterator(kScenarios)) {
      if (entry.path().extension() != ".json") continue;
      const RunConfig c = load_config(entry.path().string());
      CHECK(parse_config(to_json(c)) == c);
      ++count;
    }
    CHECK(count >= 10);
  }

  TEST_CASE("strict parsing names the offending key") {
    CHECK(config_error(R"({"command": "square", "lamda_inf": -3})").find("'lamda_inf'") != std::string::npos);
    CHECK(config_error(R"({"numerics": {"ode_step": 100}})").find("'ode_step'") != std::string::npos);
    CHECK(config_error(R"({"potential": {"kind": "constant", "val": 1}})").find("'val'") != std::string::npos);
    CHECK(config_error(R"({"output": {"plots": "x"}})").find("'plots'") != std::string::npos);
    CHECK(config_error(R"({"cell": {"n": 1, "a": [[1]]}})").find("'a'") != std::string::npos);
    CHECK(config_error(R"({"numerics": {"ode_steps": "many"}})").find("numerics.ode_steps") != std::string::npos);
    CHECK(config_error(R"({"schema_version": 2})").find("schema_version") != std::string::npos);
    CHECK(config_error(R"({"lambda_inf": "soon"})").find("lambda_inf") != std::string::npos);
    CHECK(config_error("{not json").find("invalid JSON") != std::string::npos);
  }

  TEST_CASE("range validation") {
    CHECK(config_error(R"({"numerics": {"ode_steps": 63}})").find("ode_steps") != std::string::npos);
    CHECK(config_error(R"({"numerics": {"ode_steps": 101}})").find("even") != std::string::npos);
    CHECK(config_error(R"({"numerics": {"oracle_grid": 10}})").find("oracle_grid") != std::string::npos);
    CHECK(config_error(R"({"numerics": {"angle_tol": 0}})").find("angle_tol") != std::string::npos);
    CHECK(config_error(R"({"numerics": {"zero_tol": -1e-9}})").find("zero_tol") != std::string::npos);
    CHECK(config_error(R"({"theta1": 2, "theta2": 1})").find("theta1") != std::string::npos);
    CHECK(config_error(R"({"command": "plot"})").find("plot") != std::string::npos);
    CHECK(config_error(R"({"family": "torus"})").find("torus") != std::string::npos);
    CHECK(config_error(R"({"lambda_inf": 3})").find("negative") != std::string::npos);
  }

  TEST_CASE("lambda_inf accepts auto or a number") {
    CHECK_FALSE(parse_config_text(R"({"lambda_inf": "auto"})").lambda_inf.has_value());
    CHECK(*parse_config_text(R"({"lambda_inf": -7.5})").lambda_inf == -7.5);
  }

  TEST_CASE("potential shorthand") {
    const auto c = potential_shorthand("const:-5", 2);
    CHECK(c.kind == "constant");
    const Mat v = make_potential_1d(c)(0.3);
    CHECK(v.isApprox(-5.0 * Mat::Identity(2, 2)));
    const auto cosine = make_potential_1d(potential_shorthand("cos:2:1", 1));
    CHECK(cosine(0.0)(0, 0).real() == doctest::Approx(3.0));
    CHECK(cosine(0.5)(0, 0).real() == doctest::Approx(-1.0));
    CHECK(cosine(0.25)(0, 0).real() == doctest::Approx(1.0));
    CHECK_THROWS_AS(potential_shorthand("const:abc", 1), MaslovError);
    CHECK_THROWS_AS(potential_shorthand("gauss:1", 1), MaslovError);
    const auto in_json = parse_config_text(R"({"potential": "const:-2"})");
    CHECK(in_json.potential->value_re == RealMatrix{{-2.0}});
  }

  TEST_CASE("tracks CSV") {
    EigenTracks tr;
    tr.t = {0.0, 0.5, 1.0};
    tr.values = {{-1.0}, {0.1}, {1.0 / 3.0}};
    const std::string csv = tracks_csv(tr);
    CHECK(csv == "t,j,lambda\n0,0,-1\n0.5,0,0.10000000000000001\n1,0,0.33333333333333331\n");
    const auto path = scratch_dir() / "tracks.csv";
    emit_tracks(tr, path.string());
    CHECK(read_text_file(path.string()) == csv);
    CHECK_THROWS_AS(emit_tracks(tr, (scratch_dir() / "missing" / "x.csv").string()), MaslovError);
  }

  TEST_CASE("empty crossing list serializes as an empty array") {
    MaslovResult r;
    const json j = to_json(r);
    CHECK(j.at("crossings").is_array());
    CHECK(j.at("crossings").empty());
    CHECK(j.dump().find("\"crossings\":[]") != std::string::npos);
    CHECK(crossings_csv({}) == "location,dim,signature,n_plus,n_minus,regular\n");
  }

  TEST_CASE("plane CSV round trip") {
    testsupport::Random rng(5);
    const auto space = standard_space(3);
    const auto plane = rng.plane(space);
    const Mat back = parse_plane_csv(plane_csv(plane.basis()));
    CHECK((back - plane.basis()).norm() == 0.0);
    CHECK_THROWS_AS(parse_plane_csv("1,0,2\n"), MaslovError);
    CHECK_THROWS_AS(parse_plane_csv("1,0\nx1,0\n0,oops\n"), MaslovError);
    CHECK_THROWS_AS(read_plane_csv((scratch_dir() / "nope.csv").string()), MaslovError);
  }

  TEST_CASE("plane samples and geodesic interpolation") {
    const auto samples = read_plane_samples_csv((kScenarios / "planes_rotation.csv").string());
    REQUIRE(samples.s.size() == 5);
    const auto space = standard_space(1);
    std::vector<LagrangianPlane> planes;
    for (const auto& b : samples.bases) planes.push_back(plane_from_basis(space, b));
    const auto path = geodesic_path(samples.s, planes);
    CHECK(path.a() == 0.0);
    CHECK(path.b() == 1.0);
    for (std::size_t i = 0; i < planes.size(); ++i)
      CHECK((path(samples.s[i]).unitary() - planes[i].unitary()).norm() < 1e-12);
    // Midpoint of two real lines at angles phi0, phi1 in C^1 x C^1 is the line at the mean angle.
    const LagrangianPlane mid = path(0.125);
    const double phi = 0.25 + kPi / 8.0;
    Mat expected(2, 1);
    expected << std::cos(phi), std::sin(phi);
    CHECK(intersection_dim(mid, plane_from_basis(space, expected)) == 1);
    CHECK_THROWS_AS(parse_plane_samples_csv("1,1,0\n1,0,0\n0,1,0\n0,0,0\n"), MaslovError);
  }

  TEST_CASE("exit codes") {
    CHECK(exit_code_for(ErrorCode::ConfigError) == 2);
    CHECK(exit_code_for(ErrorCode::IoError) == 2);
    CHECK(exit_code_for(ErrorCode::DegenerateCrossing) == 3);
    CHECK(exit_code_for(ErrorCode::TruncationNotConverged) == 3);
  }

  TEST_CASE("verify-periodic-1d from inline flags") {
    const auto out = scratch_dir() / "periodic.json";
    CHECK(run({"verify-periodic-1d", "--potential", "const:-5", "--theta1", "0", "--theta2", "3.14159265", "-o",
               out.string()}) == 0);
    const json r = load(out);
    CHECK(r["schema_version"] == kSchemaVersion);
    CHECK(r["pass"] == true);
    CHECK(r["result"]["lhs"] == 1);
    CHECK(r["result"]["rhs"] == 1);
  }

  TEST_CASE("path with constant samples has index zero") {
    const auto out = scratch_dir() / "path.json";
    CHECK(run({"path", "--planes", (kScenarios / "planes_constant.csv").string(), "--reference",
               (kScenarios / "reference_dirichlet.csv").string(), "-o", out.string()}) == 0);
    CHECK(load(out)["result"]["index"] == 0);
  }

  TEST_CASE("a failed comparison propagates exit code 1") {
    const auto out = scratch_dir() / "path_fail.json";
    CHECK(run({"path", "-c", (kScenarios / "path_rotation.json").string(), "--expect", "0", "-o", out.string()}) == 1);
    const json r = load(out);
    CHECK(r["pass"] == false);
    CHECK(r["result"]["index"] == 1);
  }

  TEST_CASE("configuration errors exit 2 with an error object") {
    const auto bad = scratch_dir() / "bad.json";
    std::ofstream(bad) << R"({"command": "square", "potentail": "const:1"})";
    const auto out = scratch_dir() / "bad_report.json";
    CHECK(run({"-c", bad.string(), "-o", out.string()}) == 2);
    const json r = load(out);
    CHECK(r["pass"] == false);
    CHECK(r["error"]["code"] == "ConfigError");
    CHECK(r["error"]["message"].get<std::string>().find("'potentail'") != std::string::npos);
    check_golden("config_error", r);
    CHECK(run({"square", "--no-such-flag"}) == 2);
    CHECK(run({"band", "--potential", "const:1", "--cutoff", "0", "-o", out.string()}) == 2);
  }

  TEST_CASE("numerical errors exit 3") {
    const auto out = scratch_dir() / "trunc.json";
    const auto cfg = scratch_dir() / "trunc_cfg.json";
    std::ofstream(cfg) << R"({"command": "band", "tau": 0.5, "numerics": {"cutoff": 1, "band_grid": 5},
      "potential": {"kind": "fourier", "m": 1, "fourier_modes": [
        {"k": [2], "coeff_re": [[-400]]}, {"k": [-2], "coeff_re": [[-400]]}]}})";
    CHECK(run({"-c", cfg.string(), "-o", out.string()}) == 3);
    CHECK(load(out)["error"]["code"] == "TruncationNotConverged");
  }

  TEST_CASE("inline flags override file values") {
    const auto out = scratch_dir() / "override.json";
    CHECK(run({"band", "-c", (kScenarios / "band_cell1d.json").string(), "--tau", "0.1", "--no-verify-y19", "-o",
               out.string()}) == 0);
    const json r = load(out);
    CHECK(r["config"]["tau"] == 0.1);
    CHECK(r["config"]["verify_y19"] == false);
    CHECK(r["config"]["numerics"]["cutoff"] == 16);
    CHECK(r["result"].contains("morse_table"));
  }

  TEST_CASE("--lambda-inf takes auto or a number") {
    const auto cfg = scratch_dir() / "square_fixed.json";
    std::ofstream(cfg) << R"({"command": "square", "potential": "const:-5", "theta1": 0.0, "theta2": 3.0,
      "lambda_inf": -7.0})";
    const auto out = scratch_dir() / "square_auto.json";
    CHECK(run({"square", "-c", cfg.string(), "--lambda-inf", "auto", "-o", out.string()}) == 0);
    CHECK(load(out)["config"]["lambda_inf"] == "auto");
    CHECK(run({"square", "-c", cfg.string(), "--lambda-inf", "-6.5", "-o", out.string()}) == 0);
    CHECK(load(out)["config"]["lambda_inf"] == -6.5);
    CHECK(run({"square", "-c", cfg.string(), "--lambda-inf", "-6x", "-o", out.string()}) == 2);
    CHECK(load(out)["error"]["message"].get<std::string>().find("--lambda-inf") != std::string::npos);
  }

  TEST_CASE("golden reports") {
    for (const char* name : {"periodic_const_minus5", "square_theta_minus5", "path_rotation", "band_cell1d"}) {
      const auto out = scratch_dir() / (std::string(name) + ".json");
      CHECK(run({"-c", (kScenarios / (std::string(name) + ".json")).string(), "-o", out.string()}) == 0);
      check_golden(name, load(out));
    }
  }
}
