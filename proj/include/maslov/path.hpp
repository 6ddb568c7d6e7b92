#pragma once

#include <functional>
#include <vector>

#include "maslov/symplectic.hpp"

namespace maslov {

using PlaneSampler = std::function<LagrangianPlane(double)>;

/// One-parameter family s -> F_s on [a, b]. The sampler must be pure and reentrant.
class LagrangianPath {
 public:
  LagrangianPath(double a, double b, PlaneSampler sampler, int grid_points = 17);

  double a() const { return a_; }
  double b() const { return b_; }
  LagrangianPlane operator()(double s) const { return sampler_(s); }
  const PlaneSampler& sampler() const { return sampler_; }

  /// Uniform initial grid including both endpoints.
  std::vector<double> initial_grid() const;
  int grid_points() const { return grid_points_; }
  LagrangianPath with_grid(int grid_points) const;

  LagrangianPath restricted(double c, double d) const;
  /// s -> F_{a + b - s}.
  LagrangianPath reversed() const;
  /// s -> F_{phi(s)} on [c, d]; phi must map [c, d] increasingly onto [a, b].
  LagrangianPath reparametrized(std::function<double(double)> phi, double c, double d) const;

 private:
  double a_;
  double b_;
  PlaneSampler sampler_;
  int grid_points_;
};

LagrangianPath constant_path(const LagrangianPlane& plane, double a, double b);

/// F (+) G in the doubled space.
LagrangianPlane direct_sum(const SpacePtr& doubled, const LagrangianPlane& f, const LagrangianPlane& g);

/// {(x, x)} in the doubled space.
LagrangianPlane diagonal_plane(const SpacePtr& doubled);

/// s -> F_s (+) G_s together with the diagonal reference plane.
struct DoubledProblem {
  LagrangianPath path;
  LagrangianPlane diagonal;
};

DoubledProblem doubled_problem(const LagrangianPath& first, const LagrangianPath& second);

/// Path through sampled planes at increasing parameters s_i, joined on each [s_i, s_{i+1}] by the
/// geodesic U_i exp(tau log(U_i^* U_{i+1})) of graph unitaries. A single sample gives a constant path on [s_0, s_0 + 1].
LagrangianPath geodesic_path(const std::vector<double>& s, const std::vector<LagrangianPlane>& planes,
                             int grid_points = 17);

}  // namespace maslov
