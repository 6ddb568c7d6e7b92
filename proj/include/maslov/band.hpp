#pragma once

#include <optional>
#include <vector>

#include "maslov/linalg.hpp"
#include "maslov/spectral_flow.hpp"

namespace maslov {

/// Lattice cell Q spanned by a_1..a_n with dual matrix A (A a_j = 2 pi e_j) and quasi-momentum theta.
class LatticeCell {
 public:
  /// `basis` holds a_j as columns; theta entries must lie in [0, 1).
  static LatticeCell create(const RMat& basis, const RVec& theta);
  static LatticeCell unit_interval(double theta);
  static LatticeCell unit_square(double theta1, double theta2);

  int dim() const { return static_cast<int>(basis_.cols()); }
  const RMat& basis() const { return basis_; }
  const RMat& dual() const { return dual_; }
  const RVec& theta() const { return theta_; }
  double volume() const { return volume_; }
  /// ||A^T (theta - k)||^2.
  double kinetic(const std::vector<int>& k) const;
  bool theta_is_zero() const { return theta_.cwiseAbs().maxCoeff() == 0.0; }

 private:
  RMat basis_, dual_;
  RVec theta_;
  double volume_ = 0.0;
};

struct FourierMode {
  std::vector<int> k;
  Mat coeff;
};

/// Lattice-periodic Hermitian potential V(x) = sum_q c_q exp(i (A^T q) . x), i.e. exp(2 pi i q . s)
/// in cell coordinates x = sum_j s_j a_j.
class FourierPotential {
 public:
  /// Requires c_{-q} = c_q^* for every listed mode; missing partners are rejected.
  FourierPotential(int n, int m, std::vector<FourierMode> modes);
  static FourierPotential zero(int n, int m = 1);
  static FourierPotential constant(int n, const Mat& value);

  int dim() const { return n_; }
  int size() const { return m_; }
  const std::vector<FourierMode>& modes() const { return modes_; }
  /// V at cell coordinates s.
  Mat at_cell_coords(const RVec& s) const;
  Mat at_origin() const;
  double sup_bound() const;

 private:
  int n_, m_;
  std::vector<FourierMode> modes_;
};

/// Plane waves with ||k||_inf <= K, lexicographic order.
struct FourierTruncation {
  int cutoff = 0;
  int dim = 1;
  int m = 1;
  std::vector<std::vector<int>> modes;

  static FourierTruncation create(int n, int m, int cutoff);
  int size() const { return m * static_cast<int>(modes.size()); }
};

/// The family L^t = -t^{-2} Delta_theta + V(t .) on Q for t in (0, 1].
struct ScaledFamily {
  LatticeCell cell;
  FourierPotential potential;

  ScaledFamily(LatticeCell c, FourierPotential v);
};

/// Lowest `count` values of ||A^T(theta - k)||^2 over k in Z^n, each repeated m times.
std::vector<double> exact_laplacian_spectrum(const LatticeCell& cell, int count, int m = 1);

enum class CoefficientRule {
  /// Tensor trapezoid rule with 8 (2K + 1) intervals per axis.
  trapezoid,
  /// Closed-form integrals of the exponentials; exact for Fourier-mode potentials.
  exact,
};

/// Fourier coefficient d_p = |Q|^{-1} int_Q V(t x) exp(-i (A^T p) . x) dx for ||p||_inf <= 2K,
/// indexed lexicographically over the box of side 4K + 1.
std::vector<Mat> scaled_coefficients(const ScaledFamily& family, double t, int cutoff,
                                     CoefficientRule rule = CoefficientRule::trapezoid);

/// Matrix of L^t in the plane-wave basis: block (k, k') = t^{-2} ||A^T(theta - k)||^2 delta + d_{k' - k}.
Mat galerkin_matrix(const ScaledFamily& family, double t, const FourierTruncation& trunc,
                    CoefficientRule rule = CoefficientRule::trapezoid);

struct BandOptions {
  int grid_points = 200;
  /// Bisection depth on grid intervals where the Morse index changes.
  int refine_depth = 6;
  /// Eigenvalues kept per sample for tracking; grown automatically until the top one is positive.
  int track_count = 12;
  /// Compare Morse indices against a 2K truncation at every sample.
  bool check_doubling = true;
  double zero_tol = 1e-9;
  CoefficientRule rule = CoefficientRule::trapezoid;
  bool parallel = true;

  double tau_min = 1e-3;
  int stable_repeats = 3;
  /// n = 1 only: also evaluate the Maslov index of t -> K_{0,t} against the periodic plane.
  bool maslov_side = true;
  int ode_steps = 4096;
};

struct MorseRow {
  double t = 0.0;
  int morse = 0;
  /// Morse index of the doubled truncation, when computed.
  std::optional<int> morse_doubled;
  std::vector<double> lowest;
};

struct MorseTable {
  std::vector<MorseRow> rows;
  EigenTracks tracks;
};

/// Morse index and lowest eigenvalues of galerkin_matrix on an increasing grid in (0, 1].
/// Throws TruncationNotConverged if the 2K truncation disagrees anywhere.
MorseTable morse_vs_t(const ScaledFamily& family, const std::vector<double>& t_grid, const FourierTruncation& trunc,
                      const BandOptions& opts = {});

/// Uniform grid on [tau, 1] refined where the Morse index jumps.
MorseTable morse_sweep(const ScaledFamily& family, double tau, const FourierTruncation& trunc,
                       const BandOptions& opts = {});

struct Y19Report {
  double tau = 0.0;
  int morse_tau = 0;
  int morse_one = 0;
  int spectral_flow = 0;
  bool y21_holds = false;

  /// Small-tau limit: the scale at which the Morse index settled and the settled value.
  double tau0 = 0.0;
  int morse_small = 0;
  /// theta != 0 branch: Mor(L^1) = -SpFlow over [tau0, 1], with Mor(L^{tau0}) = 0.
  std::optional<bool> y22_holds;
  int spectral_flow_tau0 = 0;
  /// theta = 0 branch: small-tau Morse index equals Mor(V(0)).
  std::optional<bool> y23_holds;
  int morse_v0 = 0;

  /// Maslov index of the rescaled one-dimensional boundary-value family, n = 1 only.
  std::optional<int> maslov_1d;

  MorseTable table;
  bool pass = false;
};

Y19Report verify_y19(const ScaledFamily& family, double tau, const FourierTruncation& trunc,
                     const BandOptions& opts = {});

}  // namespace maslov
