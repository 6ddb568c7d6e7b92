#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maslov/maslov.hpp"
#include "maslov/oracle.hpp"

namespace maslov {

struct Verify1DConfig {
  int ode_steps = 4096;
  OracleOptions oracle;
  MaslovOptions maslov;
  int path_points = 17;
  /// Parameter grid used to bracket kernel points with the oracle.
  int sweep_points = 41;
  /// Bracket width at which kernel bisection stops.
  double kernel_resolution = 1e-10;
  /// Angular tolerance for dim(K cap G) at an oracle-located kernel point.
  double kernel_intersection_tol = 1e-5;
  /// Also evaluate the crossing-form method and report whether it agrees.
  bool check_methods = true;
};

struct KernelPoint {
  double theta = 0.0;
  /// dim(K_0 cap G_theta).
  int multiplicity = 0;
  /// Drop of the oracle Morse index across the bracket.
  int oracle_jump = 0;
};

struct IdentityReport {
  std::string identity;
  double theta1 = 0.0;
  double theta2 = 0.0;
  int morse1 = 0;
  int morse2 = 0;
  int lhs_morse_diff = 0;
  int rhs_maslov = 0;
  /// Index from the crossing-form method on the same two-path problem, when it applies.
  std::optional<int> rhs_via_crossings;
  std::string crossing_method_note;
  /// Crossings of the doubled (two-path) problem.
  std::vector<CrossingReport> crossings;
  bool beyond_quoted_range = false;

  /// Robin only: oracle-located kernel points in (theta1, theta2], their total, and the forms of
  /// theta -> G_theta against K_0.
  std::vector<KernelPoint> kernels;
  int kernel_sum = 0;
  bool endpoint_kernel = false;
  std::vector<CrossingReport> single_path_forms;
  bool forms_negative = true;

  bool pass = false;
};

/// Mor(L_theta1) - Mor(L_theta2) from the oracle against Mas(K_0, G_theta) for theta-periodic planes.
IdentityReport verify_identity_rr15(const Potential1D& v, double theta1, double theta2, const Verify1DConfig& cfg = {});

/// Scalar Robin sweep Theta = theta I: oracle Morse difference, kernel sum over (theta1, theta2],
/// two-path Maslov index, and negativity of every crossing form.
IdentityReport verify_robin_monotone(const Potential1D& v, double theta1, double theta2,
                                     const Verify1DConfig& cfg = {});

}  // namespace maslov
