#pragma once

#include <functional>
#include <string>
#include <vector>

#include "maslov/symplectic.hpp"

namespace maslov {

/// Hermitian matrix potential on [0, 1].
class Potential1D {
 public:
  using Evaluator = std::function<Mat(double)>;

  struct Mode {
    int k;
    Mat coeff;
  };

  /// Validates hermiticity on a 10^4-point grid and records the sup norm.
  Potential1D(int m, Evaluator evaluator, std::string smoothness = "smooth");

  static Potential1D constant(const Mat& value);
  static Potential1D scalar(double value, int m = 1);
  /// V(x) = sum_k c_k e^{2 pi i k x}; requires c_{-k} = c_k^*.
  static Potential1D fourier(int m, std::vector<Mode> modes);
  /// Piecewise-linear interpolation of matrix samples at increasing abscissae covering [0, 1].
  static Potential1D table(std::vector<double> xs, std::vector<Mat> values);

  int size() const { return m_; }
  Mat operator()(double x) const { return eval_(x); }
  double sup_norm() const { return sup_; }
  const std::string& smoothness() const { return smoothness_; }

 private:
  int m_;
  Evaluator eval_;
  std::string smoothness_;
  double sup_ = 0.0;
};

/// Boundary space C^{2m} x C^{2m} for -u'' + Vu on [0, 1] with
/// Gamma_1 u = (u(1), u(0)) and Gamma_2 u = (u'(1), -u'(0)).
const SpacePtr& boundary_space(int m);

/// Stacks (Gamma_1 u, Gamma_2 u) from endpoint values and derivatives.
Vec boundary_trace(const Vec& u0, const Vec& u1, const Vec& du0, const Vec& du1);

enum class ExtensionKind { dirichlet, neumann, robin, theta_periodic };

const char* to_string(ExtensionKind kind) noexcept;

struct ExtensionPlane {
  ExtensionKind kind;
  int m;
  /// Robin matrix (2m x 2m) for robin; empty otherwise.
  Mat theta_matrix;
  /// Phase for theta_periodic.
  double theta = 0.0;
  LagrangianPlane plane;
};

ExtensionPlane dirichlet_plane(int m);
ExtensionPlane neumann_plane(int m);
/// {(f, -Theta f)}; Theta must be Hermitian.
ExtensionPlane robin_plane(const Mat& theta);
/// Scalar Robin parameter: Theta = theta * I_{2m}.
ExtensionPlane robin_plane(int m, double theta);
/// span{(e^{i theta} a, a, -e^{i theta} b, b)}.
ExtensionPlane theta_periodic_plane(int m, double theta);

/// Traces and L^2 Gram matrix of the fundamental solutions of -Y'' + VY = lambda Y
/// with (Y(0), Y'(0)) = (I, 0) and (0, I).
struct FundamentalSolution {
  /// 4m x 2m, columns (Y(1), Y(0), Y'(1), -Y'(0)).
  Mat trace;
  /// 2m x 2m, int_0^1 Y^* Y dx.
  Mat gram;
};

/// Fixed-step classical RK4 on a uniform grid with V pre-sampled at half steps.
class TraceIntegrator {
 public:
  explicit TraceIntegrator(const Potential1D& v, int steps = 4096);

  FundamentalSolution solve(double lambda) const;
  /// The Lagrangian plane K_lambda; throws NotLagrangian when isotropy fails beyond 1e-8.
  LagrangianPlane plane(double lambda) const;

  int m() const { return m_; }
  int steps() const { return steps_; }

 private:
  int m_;
  int steps_;
  std::vector<Mat> samples_;
};

LagrangianPlane solution_space_trace(const Potential1D& v, double lambda, int steps = 4096);

/// lambda_infinity below every operator spectrum: -||V|| - 1, minus 4||Theta||^2 for Robin.
double lambda_infinity(const Potential1D& v, const ExtensionPlane& g);

}  // namespace maslov
