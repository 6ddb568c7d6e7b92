#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "maslov/path.hpp"

namespace maslov {

#ifdef NDEBUG
inline constexpr bool kDebugBuild = false;
#else
inline constexpr bool kDebugBuild = true;
#endif

struct MaslovOptions {
  /// |arg mu| at or below this counts as the eigenvalue 1.
  double angle_tol = 1e-9;
  int max_depth = 20;
  int chebyshev_nodes = 3;
  /// Largest admissible gap metric between neighbouring samples.
  double gap_threshold = 0.3;
  /// Required ratio between the certified half-gap and the sampled eigenvalue drift.
  double drift_safety = 1.5;
  /// Re-run on a bisected partition and require the same index.
  bool verify_refinement = kDebugBuild;
  bool parallel = true;

  /// Crossing-form finite differences.
  double fd_rel_step = 1e-4;
  double fd_rel_agreement = 1e-4;
  int fd_retries = 4;
  double degeneracy_rel = 1e-6;
  double degeneracy_abs = 1e-9;
  /// Angular tolerance for intersections at a located crossing.
  double crossing_tol = 1e-6;

  /// Crossing locator resolution.
  int locator_points = 257;
  double locator_detect = 1e-7;
  double merge_rel = 1e-7;
};

enum class MaslovMethod { spectral_flow_def, crossing_form };

const char* to_string(MaslovMethod m) noexcept;

struct PartitionSegment {
  double s0;
  double s1;
  double eps;
};

struct CrossingReport {
  double location = 0.0;
  int intersection_dim = 0;
  std::vector<double> form_eigenvalues;
  int signature = 0;
  int n_plus = 0;
  int n_minus = 0;
  bool regular = true;
};

struct MaslovResult {
  int index = 0;
  MaslovMethod method = MaslovMethod::spectral_flow_def;
  std::vector<PartitionSegment> partition;
  std::vector<CrossingReport> crossings;
  std::size_t samples = 0;
};

/// Mas(F_s, Z) as the spectral flow of U_s V^{-1} through 1, with the closed-segment count
/// k(s, eps) = #{eigenvalues e^{i kappa}, kappa in [0, eps]} on a certified partition.
MaslovResult maslov_index(const LagrangianPath& path, const LagrangianPlane& z, const MaslovOptions& opts = {});

/// Mas(F_s (+) G_s, diag) in the doubled space.
MaslovResult maslov_two_paths(const LagrangianPath& first, const LagrangianPath& second,
                              const MaslovOptions& opts = {});

/// Crossing form Q(u, v) = omega(u, R'v) on F_{s*} cap Z. Step h <= 0 selects the default.
/// Degenerate forms are returned with regular = false.
CrossingReport crossing_form(const LagrangianPath& path, const LagrangianPlane& z, double s_star, double h = 0.0,
                             const MaslovOptions& opts = {});

/// Parameters in [a, b] where F_s meets Z, located by eigenvalue tracking and bisection.
std::vector<double> locate_crossings(const LagrangianPath& path, const LagrangianPlane& z,
                                     const MaslovOptions& opts = {});

/// -n_-(Q_a) + sum of interior signatures + n_+(Q_b). Throws IrregularCrossing.
MaslovResult maslov_via_crossings(const LagrangianPath& path, const LagrangianPlane& z,
                                  const std::vector<double>& locations, const MaslovOptions& opts = {});

/// Located crossings with their forms; degenerate ones are kept and flagged.
std::vector<CrossingReport> crossing_inventory(const LagrangianPath& path, const LagrangianPlane& z,
                                               const MaslovOptions& opts = {});

}  // namespace maslov
