#include "maslov/path.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "maslov/errors.hpp"

namespace maslov {

LagrangianPath::LagrangianPath(double a, double b, PlaneSampler sampler, int grid_points)
    : a_(a), b_(b), sampler_(std::move(sampler)), grid_points_(grid_points) {
  if (!(a < b)) raise(ErrorCode::ConfigError, "path interval must satisfy a < b");
  if (grid_points_ < 2) raise(ErrorCode::ConfigError, "path grid needs at least two points");
}

std::vector<double> LagrangianPath::initial_grid() const {
  std::vector<double> g(static_cast<std::size_t>(grid_points_));
  const int last = grid_points_ - 1;
  for (int i = 0; i <= last; ++i) g[static_cast<std::size_t>(i)] = a_ + (b_ - a_) * i / last;
  g.back() = b_;
  return g;
}

LagrangianPath LagrangianPath::with_grid(int grid_points) const {
  return LagrangianPath(a_, b_, sampler_, grid_points);
}

LagrangianPath LagrangianPath::restricted(double c, double d) const {
  if (c < a_ || d > b_) raise(ErrorCode::ConfigError, "restriction outside the path interval");
  return LagrangianPath(c, d, sampler_, grid_points_);
}

LagrangianPath LagrangianPath::reversed() const {
  const double a = a_, b = b_;
  auto f = sampler_;
  return LagrangianPath(a, b, [f, a, b](double s) { return f(a + b - s); }, grid_points_);
}

LagrangianPath LagrangianPath::reparametrized(std::function<double(double)> phi, double c, double d) const {
  auto f = sampler_;
  const double a = a_, b = b_;
  return LagrangianPath(
      c, d, [f, phi, a, b](double s) { return f(std::clamp(phi(s), a, b)); }, grid_points_);
}

LagrangianPath constant_path(const LagrangianPlane& plane, double a, double b) {
  return LagrangianPath(a, b, [plane](double) { return plane; }, 2);
}

LagrangianPlane direct_sum(const SpacePtr& doubled, const LagrangianPlane& f, const LagrangianPlane& g) {
  const Eigen::Index d = f.basis().rows();
  const Eigen::Index n = f.basis().cols();
  Mat b = Mat::Zero(2 * d, 2 * n);
  b.topLeftCorner(d, n) = f.basis();
  b.bottomRightCorner(d, n) = g.basis();
  return plane_from_basis(doubled, b);
}

LagrangianPlane diagonal_plane(const SpacePtr& doubled) {
  const int d = doubled->half_dim();
  Mat b(2 * d, d);
  b.topRows(d) = Mat::Identity(d, d);
  b.bottomRows(d) = Mat::Identity(d, d);
  return plane_from_basis(doubled, b / std::sqrt(2.0));
}

DoubledProblem doubled_problem(const LagrangianPath& first, const LagrangianPath& second) {
  if (first.a() != second.a() || first.b() != second.b())
    raise(ErrorCode::ConfigError, "two-path problems need a shared parameter interval");
  const LagrangianPlane probe = first(first.a());
  SpacePtr doubled = doubled_space(*probe.space());
  auto f = first.sampler();
  auto g = second.sampler();
  LagrangianPath path(
      first.a(), first.b(), [doubled, f, g](double s) { return direct_sum(doubled, f(s), g(s)); },
      std::max(first.grid_points(), second.grid_points()));
  return DoubledProblem{std::move(path), diagonal_plane(doubled)};
}

namespace {

/// W = Q diag(e^{i phi}) Q^* for a unitary W, with phi in (-pi, pi].
struct UnitarySpectral {
  Mat q;
  RVec phi;

  Mat power(double tau) const {
    Vec d(phi.size());
    for (int i = 0; i < phi.size(); ++i) d(i) = std::polar(1.0, tau * phi(i));
    return q * d.asDiagonal() * q.adjoint();
  }
};

UnitarySpectral unitary_spectral(const Mat& w) {
  Eigen::ComplexSchur<Mat> schur(w);
  if (schur.info() != Eigen::Success) raise(ErrorCode::EigensolverFailure, "Schur decomposition of a unitary failed");
  UnitarySpectral out{schur.matrixU(), RVec(w.rows())};
  for (int i = 0; i < w.rows(); ++i) out.phi(i) = std::arg(schur.matrixT()(i, i));
  return out;
}

}  // namespace

LagrangianPath geodesic_path(const std::vector<double>& s, const std::vector<LagrangianPlane>& planes, int grid_points) {
  if (s.empty() || s.size() != planes.size()) raise(ErrorCode::ConfigError, "geodesic_path needs one plane per parameter");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!(s[i] > s[i - 1])) raise(ErrorCode::ConfigError, "geodesic_path parameters must increase");
  const SpacePtr space = planes.front().space();
  if (s.size() == 1) return constant_path(planes.front(), s.front(), s.front() + 1.0);
  std::vector<UnitarySpectral> steps;
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    steps.push_back(unitary_spectral(planes[i].unitary().adjoint() * planes[i + 1].unitary()));
  auto sampler = [s, planes, steps, space](double x) {
    const auto it = std::upper_bound(s.begin(), s.end(), x);
    std::size_t i = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
    i = std::min(i, s.size() - 2);
    const double tau = std::clamp((x - s[i]) / (s[i + 1] - s[i]), 0.0, 1.0);
    if (tau == 0.0) return planes[i];
    if (tau == 1.0) return planes[i + 1];
    return plane_from_unitary(space, planes[i].unitary() * steps[i].power(tau));
  };
  return LagrangianPath(s.front(), s.back(), sampler, grid_points);
}

}  // namespace maslov
