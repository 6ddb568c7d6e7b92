#include <doctest.h>

#include <cmath>

#include "../support.hpp"
#include "maslov/errors.hpp"
#include "maslov/maslov.hpp"
#include "maslov/oracle.hpp"
#include "maslov/schrodinger1d.hpp"
#include "maslov/verify1d.hpp"

using namespace maslov;

namespace {

Mat cols(std::initializer_list<std::initializer_list<cplx>> columns) {
  const Eigen::Index c = static_cast<Eigen::Index>(columns.size());
  const Eigen::Index r = static_cast<Eigen::Index>(columns.begin()->size());
  Mat out(r, c);
  Eigen::Index j = 0;
  for (const auto& column : columns) {
    Eigen::Index i = 0;
    for (cplx x : column) out(i++, j) = x;
    ++j;
  }
  return out;
}

Potential1D cosine(double amplitude) {
  return Potential1D::fourier(1, {{1, Mat::Constant(1, 1, 0.5 * amplitude)}, {-1, Mat::Constant(1, 1, 0.5 * amplitude)}});
}

/// Random Hermitian trigonometric potential with modes |k| <= 2.
Potential1D random_trig(testsupport::Random& rng, int m) {
  std::vector<Potential1D::Mode> modes;
  modes.push_back({0, rng.hermitian(m, 2.0)});
  for (int k = 1; k <= 2; ++k) {
    const Mat c = rng.ginibre(m, m);
    modes.push_back({k, c});
    modes.push_back({-k, c.adjoint()});
  }
  return Potential1D::fourier(m, modes);
}

const double pi2 = kPi * kPi;

}  // namespace

TEST_SUITE("schrodinger_1d") {
  TEST_CASE("potentials validate hermiticity") {
    Mat bad(2, 2);
    bad << 0, 1, 0, 0;
    CHECK_THROWS_AS(Potential1D::constant(bad), MaslovError);
    CHECK(cosine(3.0).sup_norm() == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(cosine(3.0)(0.0)(0, 0).real() == doctest::Approx(3.0));
    const auto tab = Potential1D::table({0.0, 0.5, 1.0}, {Mat::Constant(1, 1, 0.0), Mat::Constant(1, 1, 2.0), Mat::Constant(1, 1, 0.0)});
    CHECK(tab(0.25)(0, 0).real() == doctest::Approx(1.0));
    CHECK_THROWS_AS(Potential1D::fourier(1, {{1, Mat::Constant(1, 1, 1.0)}}), MaslovError);
  }

  TEST_CASE("extension plane bases") {
    CHECK(linalg::same_span(dirichlet_plane(1).plane.basis(), linalg::orthonormalize(cols({{0, 0, 1, 0}, {0, 0, 0, 1}})), 1e-14));
    CHECK(linalg::same_span(theta_periodic_plane(1, 0.0).plane.basis(),
                            linalg::orthonormalize(cols({{1, 1, 0, 0}, {0, 0, -1, 1}})), 1e-14));
    CHECK(linalg::same_span(robin_plane(1, 1.0).plane.basis(),
                            linalg::orthonormalize(cols({{1, 0, -1, 0}, {0, 1, 0, -1}})), 1e-14));
    Mat nh(2, 2);
    nh << 0, 1, 2, 0;
    CHECK_THROWS_AS(robin_plane(nh), MaslovError);
    for (double th : {0.3, 1.7, 3.0, 5.5}) {
      const auto p = theta_periodic_plane(2, th);
      CHECK(p.plane.isotropy_residual() < 1e-14);
    }
  }

  TEST_CASE("solution space traces of -u'' = lambda u") {
    const auto v0 = Potential1D::scalar(0.0);
    const auto k_pi = solution_space_trace(v0, pi2);
    CHECK(linalg::same_span(k_pi.basis(), linalg::orthonormalize(cols({{0, 0, -kPi, -kPi}, {-1, 1, 0, 0}})), 1e-10));
    const auto k_0 = solution_space_trace(v0, 0.0);
    CHECK(linalg::same_span(k_0.basis(), linalg::orthonormalize(cols({{1, 1, 0, 0}, {1, 0, 1, -1}})), 1e-12));
    CHECK(intersection_dim(k_pi, dirichlet_plane(1).plane, 1e-6) == 1);
    CHECK(intersection_dim(k_0, neumann_plane(1).plane, 1e-6) == 1);
  }

  TEST_CASE("trace planes are Lagrangian across lambda in [-50, 50]") {
    testsupport::Random rng(21);
    std::vector<Potential1D> family{Potential1D::scalar(-3.0), cosine(4.0), random_trig(rng, 1), random_trig(rng, 2)};
    for (const auto& v : family) {
      const TraceIntegrator integ(v, 4096);
      for (int i = 0; i <= 100; ++i) {
        const double lambda = -50.0 + i;
        const FundamentalSolution f = integ.solve(lambda);
        const Mat b = linalg::orthonormalize(f.trace);
        CHECK((b.adjoint() * boundary_space(v.size())->J() * b).cwiseAbs().maxCoeff() <= 1e-8);
      }
    }
  }

  TEST_CASE("second Green identity for the boundary triple") {
    testsupport::Random rng(22);
    // 5-point Gauss-Legendre on [0, 1] integrates the degree-6 integrands exactly.
    const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
    const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665, 0.2369268850561891};
    const int m = 2;
    for (int trial = 0; trial < 100; ++trial) {
      const Mat cu = rng.ginibre(m, 4), cv = rng.ginibre(m, 4);
      auto val = [](const Mat& c, double x) { return Vec(c.col(0) + x * c.col(1) + x * x * c.col(2) + x * x * x * c.col(3)); };
      auto der = [](const Mat& c, double x) { return Vec(c.col(1) + 2 * x * c.col(2) + 3 * x * x * c.col(3)); };
      auto dd = [](const Mat& c, double x) { return Vec(2.0 * c.col(2) + 6 * x * c.col(3)); };
      cplx lhs = 0;
      for (int q = 0; q < 5; ++q) {
        const double x = 0.5 * (gx[q] + 1.0);
        lhs += 0.5 * gw[q] * (val(cv, x).dot(-dd(cu, x)) - (-dd(cv, x)).dot(val(cu, x)));
      }
      const Vec tu = boundary_trace(val(cu, 0), val(cu, 1), der(cu, 0), der(cu, 1));
      const Vec tv = boundary_trace(val(cv, 0), val(cv, 1), der(cv, 0), der(cv, 1));
      const cplx rhs = boundary_space(m)->omega(tu, tv);
      CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
  }

  TEST_CASE("finite-difference oracle against closed-form spectra") {
    const auto v0 = Potential1D::scalar(0.0);
    const auto d = oracle_spectrum(v0, dirichlet_plane(1));
    CHECK(d.morse_index == 0);
    for (int k = 1; k <= 4; ++k) CHECK(d.eigenvalues[static_cast<std::size_t>(k - 1)] == doctest::Approx(k * k * pi2).epsilon(1e-9));

    const auto shifted = oracle_spectrum(Potential1D::scalar(-2.0 * pi2), dirichlet_plane(1));
    CHECK(shifted.morse_index == 1);
    CHECK(shifted.eigenvalues[0] == doctest::Approx(-pi2).epsilon(1e-9));

    for (double theta : {0.0, 0.7, kPi}) {
      const auto p = oracle_spectrum(Potential1D::scalar(-5.0), theta_periodic_plane(1, theta));
      std::vector<double> exact;
      for (int k = -4; k <= 4; ++k) exact.push_back(std::pow(theta + 2 * kPi * k, 2) - 5.0);
      std::sort(exact.begin(), exact.end());
      for (std::size_t j = 0; j < 5; ++j) CHECK(p.eigenvalues[j] == doctest::Approx(exact[j]).epsilon(1e-8));
    }
    CHECK(oracle_spectrum(Potential1D::scalar(-5.0), theta_periodic_plane(1, 0.0)).morse_index == 1);
    CHECK(oracle_spectrum(Potential1D::scalar(-5.0), theta_periodic_plane(1, kPi)).morse_index == 0);
    CHECK(oracle_spectrum(Potential1D::scalar(-2.0 * pi2), theta_periodic_plane(1, 0.0)).morse_index == 1);
    CHECK(oracle_spectrum(Potential1D::scalar(-2.0 * pi2), theta_periodic_plane(1, kPi)).morse_index == 2);
    CHECK(oracle_spectrum(Potential1D::scalar(-40.0), theta_periodic_plane(1, 0.0)).morse_index == 3);
    CHECK(oracle_spectrum(Potential1D::scalar(-40.0), theta_periodic_plane(1, kPi)).morse_index == 2);
  }

  TEST_CASE("Robin oracle against the secular equation") {
    const auto v0 = Potential1D::scalar(0.0);
    const auto a = oracle_spectrum(v0, robin_plane(1, -3.0));
    CHECK(a.eigenvalues[0] == doctest::Approx(-10.521183259607264).epsilon(1e-8));
    CHECK(a.eigenvalues[1] == doctest::Approx(-6.634121847007774).epsilon(1e-8));
    CHECK(a.eigenvalues[2] == doctest::Approx(27.498376453921612).epsilon(1e-8));
    CHECK(a.eigenvalues[3] == doctest::Approx(76.82962602552973).epsilon(1e-8));
    const auto b = oracle_spectrum(v0, robin_plane(1, 1.0));
    CHECK(b.eigenvalues[0] == doctest::Approx(1.7070529755509227).epsilon(1e-8));
    CHECK(b.eigenvalues[1] == doctest::Approx(13.49235714650484).epsilon(1e-8));
    CHECK(b.eigenvalues[2] == doctest::Approx(43.35722110493781).epsilon(1e-8));
    const std::pair<double, int> morse[] = {{-3.0, 2}, {-1.0, 1}, {1.0, 0}, {2.0, 0}, {-20.0, 2}, {-5.0, 2}};
    for (auto [theta, mor] : morse) CHECK(oracle_spectrum(v0, robin_plane(1, theta)).morse_index == mor);
    CHECK_THROWS_AS(oracle_spectrum(v0, robin_plane(1, 0.0)), MaslovError);
    OracleOptions lax;
    lax.allow_ambiguous = true;
    CHECK(oracle_spectrum(v0, robin_plane(1, 0.0), lax).ambiguous);
  }

  TEST_CASE("coupled Robin matrix and matrix potentials") {
    // Theta coupling the two endpoints like a periodic condition: Theta = [[1,-1],[-1,1]] gives
    // u(1) = u(0) in the limit of large scaling; a moderate value only needs to stay Hermitian.
    Mat th(2, 2);
    th << 2.0, cplx(-1.0, 0.5), cplx(-1.0, -0.5), 3.0;
    const auto e = robin_plane(th);
    const auto v = cosine(2.0);
    const auto spec = oracle_spectrum(v, e);
    // Kernel bridge at the lowest eigenvalue.
    const double lam = spec.eigenvalues[0];
    CHECK(intersection_dim(solution_space_trace(v, lam), e.plane, 1e-5) == oracle_multiplicity(spec, lam));
  }

  TEST_CASE("lambda sweep counts eigenvalues below lambda") {
    const auto v = cosine(3.0);
    const auto g = dirichlet_plane(1);
    const auto spec = oracle_spectrum(v, g, OracleOptions{2000, 12});
    const TraceIntegrator integ(v);
    const double li = lambda_infinity(v, g);
    for (double lam : {5.0, 20.0, 60.0}) {
      const LagrangianPath path(li, lam, [&integ](double l) { return integ.plane(l); });
      const int mas = maslov_index(path, g.plane).index;
      int below = 0;
      for (double e : spec.eigenvalues) below += e < lam;
      CHECK(-mas == below);
    }
  }

  TEST_CASE("gauge invariance of extension planes") {
    testsupport::Random rng(23);
    const auto v = Potential1D::scalar(-5.0);
    const auto k0 = solution_space_trace(v, 0.0);
    const auto g = theta_periodic_plane(1, std::sqrt(5.0));
    const auto g2 = plane_from_basis(boundary_space(1), g.plane.basis() * rng.ginibre(2, 2));
    CHECK(intersection_dim(k0, g.plane, 1e-6) == 1);
    CHECK(intersection_dim(k0, g2, 1e-6) == 1);
    const LagrangianPath p1(0.0, kPi, [](double th) { return theta_periodic_plane(1, th).plane; });
    const Mat gauge = rng.ginibre(2, 2);
    const LagrangianPath p2(0.0, kPi, [gauge](double th) {
      return plane_from_basis(boundary_space(1), theta_periodic_plane(1, th).plane.basis() * gauge);
    });
    const auto kc = constant_path(k0, 0.0, kPi);
    CHECK(maslov_two_paths(kc, p1).index == maslov_two_paths(kc, p2).index);
  }

  TEST_CASE("crossing form on a lambda sweep equals minus the squared L2 norm") {
    const auto v = Potential1D::scalar(-5.0);
    const auto g = theta_periodic_plane(1, 0.0).plane;
    const TraceIntegrator integ(v);
    const LagrangianPath path(-6.0, 0.0, [&integ](double l) { return integ.plane(l); });
    const auto locs = locate_crossings(path, g);
    REQUIRE(locs.size() == 1);
    CHECK(locs[0] == doctest::Approx(-5.0).epsilon(1e-8));
    const CrossingReport c = crossing_form(path, g, locs[0]);
    REQUIRE(c.intersection_dim == 1);
    const FundamentalSolution f = integ.solve(locs[0]);
    const Mat w = intersection_basis(integ.plane(locs[0]), g, 1);
    const Mat coeff = f.trace.colPivHouseholderQr().solve(w);
    const double norm2 = (coeff.adjoint() * f.gram * coeff)(0, 0).real();
    CHECK(c.form_eigenvalues[0] == doctest::Approx(-norm2).epsilon(1e-5));
    CHECK(c.form_eigenvalues[0] < 0.0);
  }

  TEST_CASE("periodic-phase identity") {
    auto r0 = verify_identity_rr15(Potential1D::scalar(0.0), 0.1, kPi);
    CHECK(r0.lhs_morse_diff == 0);
    CHECK(r0.rhs_maslov == 0);
    CHECK(r0.pass);
    auto r5 = verify_identity_rr15(Potential1D::scalar(-5.0), 0.0, kPi);
    CHECK(r5.lhs_morse_diff == 1);
    CHECK(r5.rhs_maslov == 1);
    REQUIRE(r5.rhs_via_crossings.has_value());
    CHECK(*r5.rhs_via_crossings == 1);
    CHECK(r5.pass);
    REQUIRE(r5.crossings.size() == 1);
    CHECK(r5.crossings[0].location == doctest::Approx(std::sqrt(5.0)).epsilon(1e-8));
    auto r52 = verify_identity_rr15(Potential1D::scalar(-5.0, 2), 0.0, kPi);
    CHECK(r52.lhs_morse_diff == 2);
    CHECK(r52.rhs_maslov == 2);
    CHECK(r52.pass);
    auto beyond = verify_identity_rr15(Potential1D::scalar(-5.0), 0.5, 4.0);
    CHECK(beyond.beyond_quoted_range);
  }

  TEST_CASE("Robin monotonicity windows") {
    const auto v0 = Potential1D::scalar(0.0);
    const auto pos = verify_robin_monotone(v0, 1.0, 2.0);
    CHECK(pos.lhs_morse_diff == 0);
    CHECK(pos.kernel_sum == 0);
    CHECK(pos.rhs_maslov == 0);
    CHECK(pos.pass);
    const auto neg = verify_robin_monotone(v0, -20.0, -5.0);
    CHECK(neg.morse1 == 2);
    CHECK(neg.morse2 == 2);
    CHECK(neg.pass);
    const auto two = verify_robin_monotone(v0, -3.0, 1.0);
    CHECK(two.lhs_morse_diff == 2);
    CHECK(two.kernel_sum == 2);
    CHECK(two.rhs_maslov == 2);
    REQUIRE(two.kernels.size() == 2);
    CHECK(std::abs(two.kernels[0].theta + 2.0) < 1e-6);
    CHECK(std::abs(two.kernels[1].theta) < 1e-6);
    CHECK(two.forms_negative);
    CHECK(two.pass);
    const auto edge = verify_robin_monotone(v0, -2.0, -1.0);
    CHECK(edge.endpoint_kernel);
  }
}
