#include "maslov/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <sstream>

#include "maslov/errors.hpp"
#include "maslov/parallel.hpp"

namespace maslov {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ExtensionPlane family_plane(FamilyKind kind, int m, double t) {
  switch (kind) {
    case FamilyKind::theta_sweep_1d: return theta_periodic_plane(m, t);
    case FamilyKind::robin_sweep_1d: return robin_plane(m, t);
    case FamilyKind::scaled_band: break;
  }
  raise(ErrorCode::ConfigError, "scaled_band has no one-dimensional boundary plane family");
}

bool transversal(const LagrangianPlane& a, const LagrangianPlane& b, double tol) {
  try {
    return intersection_dim(a, b, tol) == 0;
  } catch (const MaslovError& e) {
    if (e.code() == ErrorCode::ToleranceAmbiguous) return false;
    throw;
  }
}

/// Largest relative deviation between the crossing-form eigenvalues and those of -C^* Gram C.
double l2_form_deviation(const HomotopySquare& sq, const CrossingReport& c, double t) {
  const FundamentalSolution f = sq.fundamental(c.location, t);
  const Mat w = intersection_basis(sq.k(c.location, t), sq.g(t), c.intersection_dim);
  const Mat coeff = f.trace.colPivHouseholderQr().solve(w);
  const RVec expected = linalg::hermitian_eigenvalues(-(coeff.adjoint() * f.gram * coeff));
  std::vector<double> got = c.form_eigenvalues;
  std::sort(got.begin(), got.end());
  double worst = 0.0;
  const double scale = expected.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < expected.size() && static_cast<std::size_t>(i) < got.size(); ++i)
    worst = std::max(worst, std::abs(got[static_cast<std::size_t>(i)] - expected(i)) / scale);
  return got.size() == static_cast<std::size_t>(expected.size()) ? worst : 1.0;
}

bool all_forms(const std::vector<CrossingReport>& cs, int sign) {
  for (const auto& c : cs) {
    if (!c.regular) return false;
    for (double mu : c.form_eigenvalues)
      if (!(sign * mu > 0.0)) return false;
  }
  return true;
}

std::optional<int> index_from_forms(const LagrangianPath& p, const LagrangianPlane& z,
                                    const std::vector<CrossingReport>& crossings, const MaslovOptions& mo) {
  std::vector<double> locations;
  for (const auto& c : crossings) {
    if (!c.regular) return std::nullopt;
    locations.push_back(c.location);
  }
  return maslov_via_crossings(p, z, locations, mo).index;
}

}  // namespace

const char* to_string(FamilyKind kind) noexcept {
  switch (kind) {
    case FamilyKind::theta_sweep_1d: return "theta_sweep_1d";
    case FamilyKind::robin_sweep_1d: return "robin_sweep_1d";
    case FamilyKind::scaled_band: return "scaled_band";
  }
  return "unknown";
}

FamilyKind family_from_string(const std::string& name) {
  for (FamilyKind k : {FamilyKind::theta_sweep_1d, FamilyKind::robin_sweep_1d, FamilyKind::scaled_band})
    if (name == to_string(k)) return k;
  raise(ErrorCode::ConfigError, "unknown family '" + name + "'");
}

HomotopySquare make_square_1d(FamilyKind kind, const Potential1D& v, double alpha, double beta,
                              std::optional<double> lambda_inf, const ScenarioOptions& opts) {
  if (!(alpha < beta)) raise(ErrorCode::ConfigError, "alpha must be smaller than beta");
  const int m = v.size();
  auto integ = std::make_shared<const TraceIntegrator>(v, opts.ode_steps);
  HomotopySquare sq;
  sq.id = std::string(to_string(kind)) + "_square";
  sq.alpha = alpha;
  sq.beta = beta;
  if (lambda_inf) {
    sq.lambda_inf = *lambda_inf;
  } else {
    const double far = kind == FamilyKind::robin_sweep_1d ? std::max(std::abs(alpha), std::abs(beta)) : alpha;
    sq.lambda_inf = lambda_infinity(v, family_plane(kind, m, far));
  }
  sq.k = [integ](double lambda, double) { return integ->plane(lambda); };
  sq.fundamental = [integ](double lambda, double) { return integ->solve(lambda); };
  sq.g = [kind, m](double t) { return family_plane(kind, m, t).plane; };
  const OracleOptions oracle = opts.oracle;
  sq.morse = [kind, m, v, oracle](double t) {
    OracleOptions o = oracle;
    o.allow_ambiguous = true;
    return oracle_spectrum(v, family_plane(kind, m, t), o).morse_index;
  };
  return sq;
}

VerificationReport run_square(HomotopySquare sq, const ScenarioOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  if (!(sq.lambda_inf < 0.0) || !(sq.alpha < sq.beta)) raise(ErrorCode::ConfigError, "invalid square geometry");

  std::vector<double> s4_samples(static_cast<std::size_t>(std::max(opts.sigma4_samples, 2)));
  int attempt = 0;
  for (;; ++attempt) {
    bool clean = true;
    for (std::size_t i = 0; i < s4_samples.size() && clean; ++i) {
      const double t = sq.alpha + (sq.beta - sq.alpha) * static_cast<double>(i) / static_cast<double>(s4_samples.size() - 1);
      clean = transversal(sq.k(sq.lambda_inf, t), sq.g(t), opts.intersection_tol);
    }
    if (clean) break;
    if (attempt >= opts.corner_retries) {
      std::ostringstream os;
      os << "K_{lambda_inf,t} meets G_t on the lambda_inf side after " << attempt << " shifts (lambda_inf = " << sq.lambda_inf
         << ")";
      raise(ErrorCode::SquareInconsistent, os.str());
    }
    sq.lambda_inf *= 1.1;
  }

  VerificationReport rep;
  rep.scenario = sq.id;
  rep.kind = "square";
  rep.alpha = sq.alpha;
  rep.beta = sq.beta;
  rep.lambda_inf = sq.lambda_inf;
  rep.endpoint_kernel = !transversal(sq.k(0.0, sq.alpha), sq.g(sq.alpha), opts.intersection_tol) ||
                        !transversal(sq.k(0.0, sq.beta), sq.g(sq.beta), opts.intersection_tol);

  MaslovOptions mo = opts.maslov;
  const HomotopySquare& s = sq;
  auto lambda_path = [&](double t) {
    return LagrangianPath(
        s.lambda_inf, 0.0, [&s, t](double l) { return s.k(l, t); }, opts.path_points);
  };
  auto t_side = [&](double lambda) {
    const LagrangianPath g_path(
        s.alpha, s.beta, [&s](double t) { return s.g(t); }, opts.path_points);
    const LagrangianPath k_path = s.k_depends_on_t
                                      ? LagrangianPath(
                                            s.alpha, s.beta, [&s, lambda](double t) { return s.k(lambda, t); }, opts.path_points)
                                      : constant_path(s.k(lambda, s.alpha), s.alpha, s.beta);
    return std::make_pair(k_path, g_path);
  };

  auto sides = parallel::map(
      4,
      [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        SideReport side;
        side.name = "sigma" + std::to_string(i + 1);
        if (i == 0 || i == 2) {
          const double t = i == 0 ? s.alpha : s.beta;
          const LagrangianPath p = i == 0 ? lambda_path(t) : lambda_path(t).reversed();
          const LagrangianPlane g = s.g(t);
          side.index = maslov_index(p, g, mo).index;
          side.crossings = crossing_inventory(p, g, mo);
          side.index_via_crossings = index_from_forms(p, g, side.crossings, mo);
        } else {
          auto [k_path, g_path] = t_side(i == 1 ? 0.0 : s.lambda_inf);
          if (i == 3) {
            k_path = k_path.reversed();
            g_path = g_path.reversed();
          }
          side.index = maslov_two_paths(k_path, g_path, mo).index;
          const DoubledProblem d = doubled_problem(k_path, g_path);
          side.crossings = crossing_inventory(d.path, d.diagonal, mo);
          side.index_via_crossings = index_from_forms(d.path, d.diagonal, side.crossings, mo);
        }
        side.seconds = seconds_since(t0);
        return side;
      },
      mo.parallel);
  rep.sides = std::move(sides);
  if (!opts.record_timings)
    for (auto& side : rep.sides) side.seconds = 0.0;

  const int total = rep.sides[0].index + rep.sides[1].index + rep.sides[2].index + rep.sides[3].index;
  if (total != 0) {
    std::ostringstream os;
    os << "side indices (" << rep.sides[0].index << ", " << rep.sides[1].index << ", " << rep.sides[2].index << ", "
       << rep.sides[3].index << ") sum to " << total << " with lambda_inf = " << rep.lambda_inf;
    raise(ErrorCode::SquareInconsistent, os.str());
  }

  rep.checks.push_back({"sides_sum_zero", true});
  rep.checks.push_back({"sigma1_negative_definite", all_forms(rep.sides[0].crossings, -1)});
  rep.checks.push_back({"sigma3_positive_definite", all_forms(rep.sides[2].crossings, +1)});
  rep.checks.push_back({"sigma4_zero", rep.sides[3].index == 0});
  rep.checks.push_back({"sigma4_no_crossings", rep.sides[3].crossings.empty()});
  if (sq.fundamental) {
    double worst = 0.0;
    for (const auto& c : rep.sides[0].crossings) worst = std::max(worst, l2_form_deviation(sq, c, sq.alpha));
    rep.checks.push_back({"sigma1_form_is_minus_l2_norm", worst <= opts.form_rel_tol});
  }
  if (sq.morse) {
    rep.morse_alpha = sq.morse(sq.alpha);
    rep.morse_beta = sq.morse(sq.beta);
    rep.checks.push_back({"sigma1_is_minus_morse_alpha", rep.sides[0].index == -*rep.morse_alpha});
    rep.checks.push_back({"sigma3_is_morse_beta", rep.sides[2].index == *rep.morse_beta});
    rep.checks.push_back({"sigma2_is_morse_difference", rep.sides[1].index == *rep.morse_alpha - *rep.morse_beta});
  }
  rep.checks.push_back({"crossing_method_agrees", std::all_of(rep.sides.begin(), rep.sides.end(), [](const SideReport& side) {
                           return side.index_via_crossings && *side.index_via_crossings == side.index;
                         })});
  rep.maslov = rep.sides[1].index;
  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const Check& c) { return c.ok; });
  rep.seconds = opts.record_timings ? seconds_since(start) : 0.0;
  return rep;
}

VerificationReport run_spectral_flow_identity(const FlowScenario& sc, const ScenarioOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.scenario = sc.id.empty() ? to_string(sc.family) : sc.id;
  rep.kind = "flow";

  if (sc.family == FamilyKind::scaled_band) {
    if (!sc.band) raise(ErrorCode::ConfigError, "scaled_band needs a cell and a Fourier potential");
    const auto trunc = FourierTruncation::create(sc.band->cell.dim(), sc.band->potential.size(), sc.cutoff);
    const Y19Report y = verify_y19(*sc.band, sc.tau, trunc, opts.band);
    rep.alpha = sc.tau;
    rep.beta = 1.0;
    rep.tracks = y.table.tracks;
    rep.spectral_flow = y.spectral_flow;
    rep.morse_alpha = y.morse_tau;
    rep.morse_beta = y.morse_one;
    rep.checks.push_back({"flow_is_morse_difference", y.y21_holds});
    if (y.maslov_1d) {
      rep.maslov = *y.maslov_1d;
      rep.checks.push_back({"flow_is_maslov", *y.maslov_1d == y.spectral_flow});
    }
  } else {
    if (!sc.potential) raise(ErrorCode::ConfigError, "one-dimensional families need a potential");
    if (!(sc.theta1 < sc.theta2)) raise(ErrorCode::ConfigError, "theta1 must be smaller than theta2");
    const Potential1D& v = *sc.potential;
    const int m = v.size();
    rep.alpha = sc.theta1;
    rep.beta = sc.theta2;
    const int n = std::max(opts.flow_points, 2);
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = sc.theta1 + (sc.theta2 - sc.theta1) * i / (n - 1);
    grid.back() = sc.theta2;
    OracleOptions o = opts.oracle;
    o.allow_ambiguous = true;
    auto spectra = parallel::map(
        grid.size(), [&](std::size_t i) { return oracle_spectrum(v, family_plane(sc.family, m, grid[i]), o); },
        opts.maslov.parallel);
    std::size_t keep = spectra.front().eigenvalues.size();
    for (const auto& s : spectra) keep = std::min(keep, s.eigenvalues.size());
    EigenTracks raw;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      raw.t.push_back(grid[i]);
      raw.values.emplace_back(spectra[i].eigenvalues.begin(), spectra[i].eigenvalues.begin() + static_cast<std::ptrdiff_t>(keep));
    }
    rep.tracks = match_tracks(raw);
    rep.spectral_flow = spectral_flow(rep.tracks, 0.0, opts.flow_zero_tol);
    rep.morse_alpha = spectra.front().morse_index;
    rep.morse_beta = spectra.back().morse_index;
    rep.endpoint_kernel = spectra.front().ambiguous || spectra.back().ambiguous;

    const LagrangianPlane k0 = TraceIntegrator(v, opts.ode_steps).plane(0.0);
    const FamilyKind fam = sc.family;
    const LagrangianPath g_path(
        sc.theta1, sc.theta2, [fam, m](double t) { return family_plane(fam, m, t).plane; }, opts.path_points);
    rep.maslov = maslov_two_paths(constant_path(k0, sc.theta1, sc.theta2), g_path, opts.maslov).index;
    rep.checks.push_back({"flow_is_maslov", *rep.maslov == *rep.spectral_flow});
    rep.checks.push_back({"flow_is_morse_difference", *rep.spectral_flow == *rep.morse_alpha - *rep.morse_beta});
  }
  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const Check& c) { return c.ok; });
  rep.seconds = opts.record_timings ? seconds_since(start) : 0.0;
  return rep;
}

}  // namespace maslov
