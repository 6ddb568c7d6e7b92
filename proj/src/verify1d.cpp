#include "maslov/verify1d.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "maslov/errors.hpp"
#include "maslov/parallel.hpp"

namespace maslov {

namespace {

void check_methods(const LagrangianPath& g_path, const LagrangianPlane& k0, const Verify1DConfig& cfg,
                   IdentityReport& rep) {
  const DoubledProblem d = doubled_problem(constant_path(k0, g_path.a(), g_path.b()), g_path);
  rep.crossings = crossing_inventory(d.path, d.diagonal, cfg.maslov);
  if (!cfg.check_methods) return;
  std::vector<double> locs;
  for (const auto& c : rep.crossings) locs.push_back(c.location);
  try {
    rep.rhs_via_crossings = maslov_via_crossings(d.path, d.diagonal, locs, cfg.maslov).index;
  } catch (const MaslovError& e) {
    rep.crossing_method_note = e.what();
  }
}

int robin_morse(const Potential1D& v, double theta, const OracleOptions& opts) {
  OracleOptions o = opts;
  o.allow_ambiguous = true;
  return oracle_spectrum(v, robin_plane(v.size(), theta), o).morse_index;
}

}  // namespace

IdentityReport verify_identity_rr15(const Potential1D& v, double theta1, double theta2, const Verify1DConfig& cfg) {
  if (!(theta1 < theta2)) raise(ErrorCode::ConfigError, "theta1 must be smaller than theta2");
  const int m = v.size();
  IdentityReport rep;
  rep.identity = "theta_periodic";
  rep.theta1 = theta1;
  rep.theta2 = theta2;
  rep.beyond_quoted_range = theta1 < 0.0 || theta2 > kPi;

  const auto morse = parallel::map(
      2,
      [&](std::size_t i) {
        return oracle_spectrum(v, theta_periodic_plane(m, i == 0 ? theta1 : theta2), cfg.oracle).morse_index;
      },
      cfg.maslov.parallel);
  rep.morse1 = morse[0];
  rep.morse2 = morse[1];
  rep.lhs_morse_diff = rep.morse1 - rep.morse2;

  const LagrangianPlane k0 = TraceIntegrator(v, cfg.ode_steps).plane(0.0);
  const LagrangianPath g_path(
      theta1, theta2, [m](double th) { return theta_periodic_plane(m, th).plane; }, cfg.path_points);
  rep.rhs_maslov = maslov_two_paths(constant_path(k0, theta1, theta2), g_path, cfg.maslov).index;
  check_methods(g_path, k0, cfg, rep);
  rep.pass = rep.lhs_morse_diff == rep.rhs_maslov && (!rep.rhs_via_crossings || *rep.rhs_via_crossings == rep.rhs_maslov);
  return rep;
}

IdentityReport verify_robin_monotone(const Potential1D& v, double theta1, double theta2, const Verify1DConfig& cfg) {
  if (!(theta1 < theta2)) raise(ErrorCode::ConfigError, "theta1 must be smaller than theta2");
  const int m = v.size();
  IdentityReport rep;
  rep.identity = "robin";
  rep.theta1 = theta1;
  rep.theta2 = theta2;

  const int n = std::max(cfg.sweep_points, 2);
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = theta1 + (theta2 - theta1) * i / (n - 1);
  grid.back() = theta2;
  const auto sweep = parallel::map(
      grid.size(),
      [&](std::size_t i) {
        OracleOptions o = cfg.oracle;
        o.allow_ambiguous = true;
        return oracle_spectrum(v, robin_plane(m, grid[i]), o);
      },
      cfg.maslov.parallel);
  rep.morse1 = sweep.front().morse_index;
  rep.morse2 = sweep.back().morse_index;
  rep.lhs_morse_diff = rep.morse1 - rep.morse2;
  rep.endpoint_kernel = sweep.front().ambiguous || sweep.back().ambiguous;

  // Bisect every bracket where the oracle Morse index drops, splitting until each jump is isolated.
  struct Jump {
    double theta;
    int drop;
  };
  std::vector<std::vector<Jump>> per_cell = parallel::map(
      grid.size() - 1,
      [&](std::size_t i) {
        std::vector<Jump> found;
        std::function<void(double, double, int, int)> split = [&](double lo, double hi, int mlo, int mhi) {
          if (mlo == mhi) return;
          if (hi - lo <= cfg.kernel_resolution * std::max(1.0, theta2 - theta1)) {
            found.push_back({hi, mlo - mhi});
            return;
          }
          const double mid = 0.5 * (lo + hi);
          const int mm = robin_morse(v, mid, cfg.oracle);
          split(lo, mid, mlo, mm);
          split(mid, hi, mm, mhi);
        };
        split(grid[i], grid[i + 1], sweep[i].morse_index, sweep[i + 1].morse_index);
        return found;
      },
      cfg.maslov.parallel);

  const LagrangianPlane k0 = TraceIntegrator(v, cfg.ode_steps).plane(0.0);
  for (const auto& cell : per_cell)
    for (const auto& j : cell) {
      KernelPoint kp;
      kp.theta = j.theta;
      kp.oracle_jump = j.drop;
      kp.multiplicity = intersection_dim(k0, robin_plane(m, j.theta).plane, cfg.kernel_intersection_tol);
      rep.kernels.push_back(kp);
      rep.kernel_sum += kp.multiplicity;
    }

  const LagrangianPath g_path(
      theta1, theta2, [m](double th) { return robin_plane(m, th).plane; }, cfg.path_points);
  rep.rhs_maslov = maslov_two_paths(constant_path(k0, theta1, theta2), g_path, cfg.maslov).index;
  check_methods(g_path, k0, cfg, rep);

  rep.single_path_forms = crossing_inventory(g_path, k0, cfg.maslov);
  for (const auto& c : rep.single_path_forms)
    for (double mu : c.form_eigenvalues)
      if (!(mu < -1e-8) || !c.regular) rep.forms_negative = false;

  bool jumps_match = true;
  for (const auto& kp : rep.kernels) jumps_match = jumps_match && kp.multiplicity == kp.oracle_jump;
  rep.pass = rep.lhs_morse_diff == rep.kernel_sum && rep.rhs_maslov == rep.kernel_sum && rep.forms_negative &&
             jumps_match && (!rep.rhs_via_crossings || *rep.rhs_via_crossings == rep.rhs_maslov);
  return rep;
}

}  // namespace maslov
