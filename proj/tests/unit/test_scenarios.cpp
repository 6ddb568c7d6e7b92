#include <doctest.h>

#include <cmath>

#include "maslov/errors.hpp"
#include "maslov/scenarios.hpp"

using namespace maslov;

namespace {

std::vector<int> side_indices(const VerificationReport& r) {
  std::vector<int> out;
  for (const auto& s : r.sides) out.push_back(s.index);
  return out;
}

bool check(const VerificationReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c.ok;
  FAIL("missing check " << name);
  return false;
}

}  // namespace

TEST_SUITE("theorem_scenarios") {
  TEST_CASE("theta-periodic square, V = -5") {
    const auto r = run_square(make_square_1d(FamilyKind::theta_sweep_1d, Potential1D::scalar(-5.0), 0.0, kPi));
    CHECK(side_indices(r) == std::vector<int>{-1, 1, 0, 0});
    CHECK(r.lambda_inf == doctest::Approx(-6.0));
    CHECK(*r.morse_alpha == 1);
    CHECK(*r.morse_beta == 0);
    CHECK(*r.maslov == 1);
    CHECK(check(r, "sigma1_negative_definite"));
    CHECK(check(r, "sigma3_positive_definite"));
    CHECK(check(r, "sigma4_no_crossings"));
    CHECK(check(r, "sigma1_form_is_minus_l2_norm"));
    CHECK(check(r, "sigma2_is_morse_difference"));
    CHECK_FALSE(r.endpoint_kernel);
    CHECK(r.pass);
    // Unit-normalized trace of u = 1 is (1, 1, 0, 0) / sqrt 2, so -||u||^2 = -1/2.
    REQUIRE(r.sides[0].crossings.size() == 1);
    CHECK(r.sides[0].crossings[0].location == doctest::Approx(-5.0).epsilon(1e-8));
    CHECK(r.sides[0].crossings[0].form_eigenvalues[0] == doctest::Approx(-0.5).epsilon(1e-5));
  }

  TEST_CASE("V = 0 square has no contributions") {
    const auto r = run_square(make_square_1d(FamilyKind::theta_sweep_1d, Potential1D::scalar(0.0), 0.1, kPi));
    CHECK(side_indices(r) == std::vector<int>{0, 0, 0, 0});
    CHECK(r.pass);
  }

  TEST_CASE("double crossings and Robin squares") {
    const auto deep = run_square(make_square_1d(FamilyKind::theta_sweep_1d, Potential1D::scalar(-40.0), 0.0, kPi));
    CHECK(side_indices(deep) == std::vector<int>{-3, 1, 2, 0});
    CHECK(deep.pass);
    const auto robin = run_square(make_square_1d(FamilyKind::robin_sweep_1d, Potential1D::scalar(0.0), -3.0, 1.0));
    CHECK(side_indices(robin) == std::vector<int>{-2, 2, 0, 0});
    CHECK(robin.lambda_inf == doctest::Approx(-37.0));
    CHECK(robin.pass);
  }

  TEST_CASE("a crossing at the lambda_inf corner moves lambda_inf") {
    const auto r = run_square(make_square_1d(FamilyKind::theta_sweep_1d, Potential1D::scalar(-5.0), 0.0, kPi, -5.0));
    CHECK(r.lambda_inf == doctest::Approx(-5.5));
    CHECK(side_indices(r) == std::vector<int>{-1, 1, 0, 0});
    CHECK(r.pass);
  }

  TEST_CASE("persistent corner crossings abort") {
    auto sq = make_square_1d(FamilyKind::theta_sweep_1d, Potential1D::scalar(-5.0), 0.0, kPi);
    sq.k = [g = sq.g](double, double t) { return g(t); };
    try {
      run_square(sq);
      FAIL("expected SquareInconsistent");
    } catch (const MaslovError& e) {
      CHECK(e.code() == ErrorCode::SquareInconsistent);
    }
  }

  TEST_CASE("reversal negates an index with interior regular crossings") {
    const TraceIntegrator integ(Potential1D::scalar(-5.0));
    const LagrangianPath p(-6.0, -1.0, [&integ](double l) { return integ.plane(l); });
    const auto g = theta_periodic_plane(1, 0.0).plane;
    const int fwd = maslov_index(p, g).index;
    CHECK(fwd == -1);
    CHECK(maslov_index(p.reversed(), g).index == 1);
  }

  TEST_CASE("spectral flow identities") {
    ScenarioOptions o;
    o.flow_points = 21;
    FlowScenario theta;
    theta.family = FamilyKind::theta_sweep_1d;
    theta.potential = Potential1D::scalar(-5.0);
    theta.theta1 = 0.0;
    theta.theta2 = kPi;
    const auto a = run_spectral_flow_identity(theta, o);
    CHECK(*a.spectral_flow == 1);
    CHECK(*a.maslov == 1);
    CHECK(a.pass);

    FlowScenario robin;
    robin.family = FamilyKind::robin_sweep_1d;
    robin.potential = Potential1D::scalar(0.0);
    robin.theta1 = 1.0;
    robin.theta2 = 2.0;
    const auto b = run_spectral_flow_identity(robin, o);
    CHECK(*b.spectral_flow == 0);
    CHECK(*b.maslov == 0);
    CHECK(b.pass);

    FlowScenario band;
    band.family = FamilyKind::scaled_band;
    band.band.emplace(LatticeCell::unit_interval(0.5), FourierPotential::constant(1, Mat::Constant(1, 1, -2.0 * kPi * kPi)));
    band.tau = 0.05;
    const auto c = run_spectral_flow_identity(band, o);
    CHECK(*c.spectral_flow == -2);
    CHECK(*c.maslov == -2);
    CHECK(c.pass);
  }

  TEST_CASE("family names") {
    CHECK(family_from_string("robin_sweep_1d") == FamilyKind::robin_sweep_1d);
    CHECK_THROWS_AS(family_from_string("torus"), MaslovError);
    FlowScenario missing;
    missing.family = FamilyKind::scaled_band;
    CHECK_THROWS_AS(run_spectral_flow_identity(missing), MaslovError);
  }
}
