#include "maslov/schrodinger1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "maslov/errors.hpp"

namespace maslov {

namespace {

constexpr int kValidationPoints = 10000;
constexpr int kMaxIntegratorBlock = 4;

// Stack-allocated state for RK4: 2m x 2m with m <= 4.
using Small = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 2 * kMaxIntegratorBlock,
                            2 * kMaxIntegratorBlock>;

double hermitian_norm(const Mat& v) {
  if (v.rows() == 1) return std::abs(v(0, 0).real());
  return linalg::hermitian_eigenvalues(v).cwiseAbs().maxCoeff();
}

}  // namespace

Potential1D::Potential1D(int m, Evaluator evaluator, std::string smoothness)
    : m_(m), eval_(std::move(evaluator)), smoothness_(std::move(smoothness)) {
  if (m_ < 1) raise(ErrorCode::ConfigError, "potential size must be positive");
  for (int i = 0; i <= kValidationPoints; ++i) {
    const double x = static_cast<double>(i) / kValidationPoints;
    const Mat v = eval_(x);
    if (v.rows() != m_ || v.cols() != m_) raise(ErrorCode::ConfigError, "potential returned a matrix of the wrong size");
    const double asym = (v - v.adjoint()).cwiseAbs().maxCoeff();
    if (!(asym <= 1e-12)) {
      std::ostringstream os;
      os << "V(" << x << ") deviates from hermiticity by " << asym;
      raise(ErrorCode::NotHermitian, os.str());
    }
    const double nv = hermitian_norm(v);
    if (!std::isfinite(nv)) raise(ErrorCode::ConfigError, "potential is not finite");
    sup_ = std::max(sup_, nv);
  }
}

Potential1D Potential1D::constant(const Mat& value) {
  return Potential1D(static_cast<int>(value.rows()), [value](double) { return value; }, "constant");
}

Potential1D Potential1D::scalar(double value, int m) { return constant(value * Mat::Identity(m, m)); }

Potential1D Potential1D::fourier(int m, std::vector<Mode> modes) {
  for (const auto& md : modes) {
    if (md.coeff.rows() != m || md.coeff.cols() != m) raise(ErrorCode::ConfigError, "Fourier coefficient has the wrong size");
    const Mat* partner = nullptr;
    for (const auto& other : modes)
      if (other.k == -md.k) partner = &other.coeff;
    const double scale = std::max(1.0, md.coeff.cwiseAbs().maxCoeff());
    if (partner == nullptr || (*partner - md.coeff.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      std::ostringstream os;
      os << "Fourier coefficients at k = " << md.k << " and " << -md.k << " are not adjoint";
      raise(ErrorCode::NotHermitian, os.str());
    }
  }
  auto eval = [m, modes](double x) {
    Mat v = Mat::Zero(m, m);
    for (const auto& md : modes) v += md.coeff * std::exp(kI * (2.0 * kPi * md.k * x));
    return linalg::hermitian_part(v);
  };
  return Potential1D(m, eval, "fourier");
}

Potential1D Potential1D::table(std::vector<double> xs, std::vector<Mat> values) {
  if (xs.size() < 2 || xs.size() != values.size()) raise(ErrorCode::ConfigError, "table needs matching abscissae and values");
  if (!std::is_sorted(xs.begin(), xs.end()) || xs.front() > 0.0 || xs.back() < 1.0)
    raise(ErrorCode::ConfigError, "table abscissae must increase and cover [0, 1]");
  const int m = static_cast<int>(values.front().rows());
  auto eval = [xs, values](double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t hi = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - xs.begin(), 1, static_cast<std::ptrdiff_t>(xs.size()) - 1));
    const std::size_t lo = hi - 1;
    const double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return Mat((1.0 - w) * values[lo] + w * values[hi]);
  };
  return Potential1D(m, eval, "piecewise-linear");
}

const SpacePtr& boundary_space(int m) {
  static const std::vector<SpacePtr> cache = [] {
    std::vector<SpacePtr> c;
    for (int k = 1; k <= 8; ++k) c.push_back(standard_space(2 * k));
    return c;
  }();
  if (m < 1 || m > 8) raise(ErrorCode::ConfigError, "boundary space supports 1 <= m <= 8");
  return cache[static_cast<std::size_t>(m - 1)];
}

Vec boundary_trace(const Vec& u0, const Vec& u1, const Vec& du0, const Vec& du1) {
  const Eigen::Index m = u0.size();
  Vec t(4 * m);
  t << u1, u0, du1, -du0;
  return t;
}

const char* to_string(ExtensionKind kind) noexcept {
  switch (kind) {
    case ExtensionKind::dirichlet: return "dirichlet";
    case ExtensionKind::neumann: return "neumann";
    case ExtensionKind::robin: return "robin";
    case ExtensionKind::theta_periodic: return "theta_periodic";
  }
  return "unknown";
}

ExtensionPlane dirichlet_plane(int m) {
  Mat b = Mat::Zero(4 * m, 2 * m);
  b.bottomRows(2 * m) = Mat::Identity(2 * m, 2 * m);
  return ExtensionPlane{ExtensionKind::dirichlet, m, Mat(), 0.0, plane_from_basis(boundary_space(m), b)};
}

ExtensionPlane neumann_plane(int m) {
  Mat b = Mat::Zero(4 * m, 2 * m);
  b.topRows(2 * m) = Mat::Identity(2 * m, 2 * m);
  return ExtensionPlane{ExtensionKind::neumann, m, Mat(), 0.0, plane_from_basis(boundary_space(m), b)};
}

ExtensionPlane robin_plane(const Mat& theta) {
  const Eigen::Index p = theta.rows();
  if (p == 0 || p % 2 != 0 || theta.cols() != p) raise(ErrorCode::ConfigError, "Robin matrix must be 2m x 2m");
  const double scale = std::max(1.0, theta.cwiseAbs().maxCoeff());
  if ((theta - theta.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    raise(ErrorCode::NotHermitian, "Robin matrix is not Hermitian");
  const int m = static_cast<int>(p / 2);
  Mat b(2 * p, p);
  b.topRows(p) = Mat::Identity(p, p);
  b.bottomRows(p) = -linalg::hermitian_part(theta);
  return ExtensionPlane{ExtensionKind::robin, m, theta, 0.0, plane_from_basis(boundary_space(m), b)};
}

ExtensionPlane robin_plane(int m, double theta) {
  ExtensionPlane e = robin_plane(Mat(theta * Mat::Identity(2 * m, 2 * m)));
  e.theta = theta;
  return e;
}

ExtensionPlane theta_periodic_plane(int m, double theta) {
  const cplx ph = std::exp(kI * theta);
  Mat b = Mat::Zero(4 * m, 2 * m);
  for (int j = 0; j < m; ++j) {
    b(j, j) = ph;
    b(m + j, j) = 1.0;
    b(2 * m + j, m + j) = -ph;
    b(3 * m + j, m + j) = 1.0;
  }
  return ExtensionPlane{ExtensionKind::theta_periodic, m, Mat(), theta, plane_from_basis(boundary_space(m), b)};
}

TraceIntegrator::TraceIntegrator(const Potential1D& v, int steps) : m_(v.size()), steps_(steps) {
  if (steps_ < 64 || steps_ % 2 != 0) raise(ErrorCode::ConfigError, "integrator steps must be even and at least 64");
  if (m_ > kMaxIntegratorBlock) raise(ErrorCode::ConfigError, "integrator supports m <= 4");
  samples_.reserve(static_cast<std::size_t>(2 * steps_ + 1));
  for (int j = 0; j <= 2 * steps_; ++j) samples_.push_back(v(0.5 * j / steps_));
}

FundamentalSolution TraceIntegrator::solve(double lambda) const {
  const int m = m_;
  const int d = 2 * m;
  const double h = 1.0 / steps_;
  // S = [Y; Y'] with S' = A(x) S, A = [[0, I], [V - lambda, 0]].
  Small s = Small::Identity(d, d);
  Small k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);
  Small vm(m, m);
  auto apply = [&](const Mat& v, const Small& x, Small& out) {
    vm = v;
    vm.diagonal().array() -= lambda;
    out.topRows(m) = x.bottomRows(m);
    out.bottomRows(m).noalias() = vm * x.topRows(m);
  };
  Mat gram = Mat::Zero(d, d);
  auto accumulate = [&](int k, const Small& state) {
    const double w = (k == 0 || k == steps_) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    gram.noalias() += (w * h / 3.0) * (state.topRows(m).adjoint() * state.topRows(m));
  };
  accumulate(0, s);
  for (int k = 0; k < steps_; ++k) {
    const Mat& v0 = samples_[static_cast<std::size_t>(2 * k)];
    const Mat& vh = samples_[static_cast<std::size_t>(2 * k + 1)];
    const Mat& v1 = samples_[static_cast<std::size_t>(2 * k + 2)];
    apply(v0, s, k1);
    tmp = s + (0.5 * h) * k1;
    apply(vh, tmp, k2);
    tmp = s + (0.5 * h) * k2;
    apply(vh, tmp, k3);
    tmp = s + h * k3;
    apply(v1, tmp, k4);
    s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    accumulate(k + 1, s);
  }
  FundamentalSolution out;
  out.trace = Mat::Zero(4 * m, d);
  out.trace.topRows(m) = s.topRows(m);
  out.trace.block(m, 0, m, m) = Mat::Identity(m, m);
  out.trace.block(2 * m, 0, m, d) = s.bottomRows(m);
  out.trace.block(3 * m, m, m, m) = -Mat::Identity(m, m);
  out.gram = linalg::hermitian_part(gram);
  return out;
}

LagrangianPlane TraceIntegrator::plane(double lambda) const {
  const FundamentalSolution f = solve(lambda);
  try {
    return plane_from_basis(boundary_space(m_), f.trace, 1e-8);
  } catch (const MaslovError& e) {
    if (e.code() == ErrorCode::NotIsotropic) {
      std::ostringstream os;
      os << "solution trace at lambda = " << lambda << ": " << e.detail();
      raise(ErrorCode::NotLagrangian, os.str());
    }
    throw;
  }
}

LagrangianPlane solution_space_trace(const Potential1D& v, double lambda, int steps) {
  return TraceIntegrator(v, steps).plane(lambda);
}

double lambda_infinity(const Potential1D& v, const ExtensionPlane& g) {
  double li = -v.sup_norm() - 1.0;
  if (g.kind == ExtensionKind::robin) {
    Eigen::JacobiSVD<Mat> svd(g.theta_matrix);
    const double nt = svd.singularValues()(0);
    li -= 4.0 * nt * nt;
  }
  return li;
}

}  // namespace maslov
