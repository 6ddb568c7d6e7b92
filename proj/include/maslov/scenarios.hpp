#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "maslov/band.hpp"
#include "maslov/maslov.hpp"
#include "maslov/oracle.hpp"
#include "maslov/spectral_flow.hpp"

namespace maslov {

/// Rectangle [lambda_inf, 0] x [alpha, beta] with boundary-plane suppliers.
/// Sides: S1 lambda from lambda_inf to 0 at t = alpha, S2 t from alpha to beta at lambda = 0,
/// S3 lambda from 0 to lambda_inf at t = beta, S4 t from beta to alpha at lambda = lambda_inf.
struct HomotopySquare {
  std::string id;
  double lambda_inf = -1.0;
  double alpha = 0.0;
  double beta = 1.0;
  std::function<LagrangianPlane(double lambda, double t)> k;
  std::function<LagrangianPlane(double t)> g;
  /// Optional: fundamental solutions, enabling the -||u_0||^2 comparison on S1.
  std::function<FundamentalSolution(double lambda, double t)> fundamental;
  /// Optional: oracle Morse index of the operator at parameter t.
  std::function<int(double t)> morse;
  bool k_depends_on_t = false;
};

struct ScenarioOptions {
  int ode_steps = 4096;
  OracleOptions oracle;
  MaslovOptions maslov;
  int path_points = 17;
  /// Samples of S4 checked for dim(K cap G) = 0.
  int sigma4_samples = 33;
  double intersection_tol = 1e-6;
  /// Relative agreement of S1 crossing forms with -C^* Gram C.
  double form_rel_tol = 1e-4;
  int corner_retries = 5;
  /// Parameter samples of the oracle eigenvalue tracks for spectral-flow scenarios.
  int flow_points = 41;
  /// Oracle eigenvalues within this distance of zero count as nonnegative when tracking.
  double flow_zero_tol = 1e-6;
  BandOptions band;
  bool record_timings = false;
};

struct SideReport {
  std::string name;
  int index = 0;
  /// Same index from the crossing forms; empty when some crossing is irregular.
  std::optional<int> index_via_crossings;
  std::vector<CrossingReport> crossings;
  double seconds = 0.0;
};

struct Check {
  std::string name;
  bool ok = false;
};

struct VerificationReport {
  std::string scenario;
  std::string kind;
  double alpha = 0.0;
  double beta = 0.0;
  double lambda_inf = 0.0;
  std::vector<SideReport> sides;
  std::optional<int> morse_alpha;
  std::optional<int> morse_beta;
  std::optional<int> spectral_flow;
  std::optional<int> maslov;
  /// A kernel at a lambda = 0 corner: Morse indices exclude it by construction.
  bool endpoint_kernel = false;
  std::vector<Check> checks;
  EigenTracks tracks;
  double seconds = 0.0;
  bool pass = false;
};

enum class FamilyKind { theta_sweep_1d, robin_sweep_1d, scaled_band };

const char* to_string(FamilyKind kind) noexcept;
FamilyKind family_from_string(const std::string& name);

/// Square for -u'' + Vu on [0, 1] with G_t the theta-periodic (t = phase) or scalar Robin (Theta = t I) plane.
/// lambda_inf defaults to the bound of lambda_infinity over the parameter range.
HomotopySquare make_square_1d(FamilyKind kind, const Potential1D& v, double alpha, double beta,
                              std::optional<double> lambda_inf = std::nullopt, const ScenarioOptions& opts = {});

/// Side indices, definiteness of the lambda-side crossing forms, S4 transversality, and total zero.
/// Throws SquareInconsistent when the sides do not sum to zero or a corner crossing at lambda_inf persists.
VerificationReport run_square(HomotopySquare square, const ScenarioOptions& opts = {});

struct FlowScenario {
  std::string id;
  FamilyKind family = FamilyKind::theta_sweep_1d;
  std::optional<Potential1D> potential;
  double theta1 = 0.0;
  double theta2 = 1.0;
  std::optional<ScaledFamily> band;
  double tau = 0.05;
  int cutoff = 16;
};

/// Spectral flow of oracle (or Galerkin) eigenvalue tracks against the Maslov index of the boundary-plane path.
VerificationReport run_spectral_flow_identity(const FlowScenario& scenario, const ScenarioOptions& opts = {});

}  // namespace maslov
