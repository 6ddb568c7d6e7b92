#include "maslov/maslov.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "maslov/errors.hpp"
#include "maslov/parallel.hpp"

namespace maslov {

const char* to_string(MaslovMethod m) noexcept {
  return m == MaslovMethod::spectral_flow_def ? "spectral_flow_def" : "crossing_form";
}

namespace {

struct Sample {
  Mat basis;
  Vec mu;
};

using SampleCache = std::map<double, Sample>;

Sample take_sample(const LagrangianPath& path, const LagrangianPlane& z, double s) {
  LagrangianPlane f = path(s);
  if (f.space()->dim() != z.space()->dim()) raise(ErrorCode::ConfigError, "path and reference live in different spaces");
  return Sample{f.basis(), linalg::unit_eigenvalues(relative_unitary(f, z))};
}

void fill_cache(SampleCache& cache, std::vector<double> wanted, const LagrangianPath& path, const LagrangianPlane& z,
                bool parallel) {
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());
  std::vector<double> missing;
  for (double s : wanted)
    if (!cache.count(s)) missing.push_back(s);
  auto fresh = parallel::map(
      missing.size(), [&](std::size_t i) { return take_sample(path, z, missing[i]); }, parallel);
  for (std::size_t i = 0; i < missing.size(); ++i) cache.emplace(missing[i], std::move(fresh[i]));
}

std::vector<double> interval_nodes(double s0, double s1, int m) {
  std::vector<double> nodes{s0};
  const double mid = 0.5 * (s0 + s1), half = 0.5 * (s1 - s0);
  for (int k = m; k >= 1; --k) nodes.push_back(mid + half * std::cos((2.0 * k - 1.0) * kPi / (2.0 * m)));
  nodes.push_back(s1);
  return nodes;
}

int k_count(const Vec& mu, double eps, double tol) {
  int k = 0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double a = std::arg(mu(i));
    if (a >= -tol && a <= eps) ++k;
  }
  return k;
}

RMat angular_cost(const Vec& m1, const Vec& m2) {
  RMat c(m1.size(), m2.size());
  for (Eigen::Index i = 0; i < m1.size(); ++i)
    for (Eigen::Index j = 0; j < m2.size(); ++j) c(i, j) = linalg::angular_distance(m1(i), m2(j));
  return c;
}

double matched_drift(const Vec& m1, const Vec& m2) {
  const RMat c = angular_cost(m1, m2);
  const auto assign = linalg::optimal_assignment(c);
  double d = 0.0;
  for (std::size_t i = 0; i < assign.size(); ++i) d = std::max(d, c(static_cast<Eigen::Index>(i), assign[i]));
  return d;
}

struct Verdict {
  bool continuous = true;
  bool certified = false;
  double eps = 0.0;
};

Verdict examine(const std::vector<const Sample*>& seq, const MaslovOptions& opts) {
  Verdict v;
  double drift = 0.0;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    if (linalg::gap_metric(seq[i]->basis, seq[i + 1]->basis) > opts.gap_threshold) v.continuous = false;
    drift = std::max(drift, matched_drift(seq[i]->mu, seq[i + 1]->mu));
  }
  if (!v.continuous) return v;
  std::vector<double> pts{0.0, kPi};
  for (const Sample* s : seq)
    for (Eigen::Index i = 0; i < s->mu.size(); ++i) pts.push_back(std::abs(std::arg(s->mu(i))));
  std::sort(pts.begin(), pts.end());
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    if (pts[i + 1] - pts[i] > hi - lo) {
      lo = pts[i];
      hi = pts[i + 1];
    }
  v.eps = 0.5 * (lo + hi);
  const double margin = 0.5 * (hi - lo);
  v.certified = margin > opts.drift_safety * drift + opts.angle_tol && v.eps > opts.angle_tol && v.eps < kPi;
  return v;
}

MaslovResult run_partition(const LagrangianPath& path, const LagrangianPlane& z, const MaslovOptions& opts,
                           const std::vector<double>& grid) {
  struct Pending {
    double s0, s1;
    int depth;
  };
  std::vector<Pending> pending;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) pending.push_back({grid[i], grid[i + 1], 0});

  SampleCache cache;
  MaslovResult result;
  while (!pending.empty()) {
    std::vector<double> wanted;
    for (const auto& p : pending)
      for (double s : interval_nodes(p.s0, p.s1, opts.chebyshev_nodes)) wanted.push_back(s);
    fill_cache(cache, std::move(wanted), path, z, opts.parallel);

    std::vector<Pending> next;
    for (const auto& p : pending) {
      std::vector<const Sample*> seq;
      for (double s : interval_nodes(p.s0, p.s1, opts.chebyshev_nodes)) seq.push_back(&cache.at(s));
      const Verdict v = examine(seq, opts);
      if (v.continuous && v.certified) {
        result.partition.push_back({p.s0, p.s1, v.eps});
        result.index += k_count(seq.back()->mu, v.eps, opts.angle_tol) - k_count(seq.front()->mu, v.eps, opts.angle_tol);
        continue;
      }
      if (p.depth >= opts.max_depth) {
        std::ostringstream os;
        os << "on [" << p.s0 << ", " << p.s1 << "] after " << opts.max_depth << " bisections";
        raise(v.continuous ? ErrorCode::PartitionFailure : ErrorCode::DiscontinuousPath, os.str());
      }
      const double mid = 0.5 * (p.s0 + p.s1);
      next.push_back({p.s0, mid, p.depth + 1});
      next.push_back({mid, p.s1, p.depth + 1});
    }
    pending = std::move(next);
  }
  std::sort(result.partition.begin(), result.partition.end(),
            [](const PartitionSegment& x, const PartitionSegment& y) { return x.s0 < y.s0; });
  result.samples = cache.size();
  return result;
}

Mat graph_map(const Mat& bstar, const Mat& bs) {
  const Mat c = bstar.adjoint() * bs;
  Eigen::JacobiSVD<Mat> svd(c);
  const RVec& sv = svd.singularValues();
  if (sv(sv.size() - 1) < 0.3) raise(ErrorCode::NotGraphRepresentable, "plane is too far from the base plane");
  return (bs - bstar * c) * c.inverse();
}

Mat graph_derivative(const LagrangianPath& path, const Mat& bstar, double s, double h) {
  auto m = [&](double t) { return graph_map(bstar, path(t).basis()); };
  if (s - h < path.a()) return (-3.0 * m(s) + 4.0 * m(s + h) - m(s + 2.0 * h)) / (2.0 * h);
  if (s + h > path.b()) return (3.0 * m(s) - 4.0 * m(s - h) + m(s - 2.0 * h)) / (2.0 * h);
  return (m(s + h) - m(s - h)) / (2.0 * h);
}

}  // namespace

MaslovResult maslov_index(const LagrangianPath& path, const LagrangianPlane& z, const MaslovOptions& opts) {
  MaslovResult result = run_partition(path, z, opts, path.initial_grid());
  if (opts.verify_refinement) {
    std::vector<double> refined;
    for (const auto& seg : result.partition) {
      refined.push_back(seg.s0);
      refined.push_back(0.5 * (seg.s0 + seg.s1));
    }
    refined.push_back(path.b());
    const MaslovResult again = run_partition(path, z, opts, refined);
    if (again.index != result.index) {
      std::ostringstream os;
      os << "index " << result.index << " changed to " << again.index << " under refinement";
      raise(ErrorCode::PartitionFailure, os.str());
    }
  }
  return result;
}

MaslovResult maslov_two_paths(const LagrangianPath& first, const LagrangianPath& second, const MaslovOptions& opts) {
  const DoubledProblem d = doubled_problem(first, second);
  return maslov_index(d.path, d.diagonal, opts);
}

CrossingReport crossing_form(const LagrangianPath& path, const LagrangianPlane& z, double s_star, double h,
                             const MaslovOptions& opts) {
  const LagrangianPlane fstar = path(s_star);
  const int k = intersection_dim(fstar, z, opts.crossing_tol);
  if (k == 0) {
    std::ostringstream os;
    os << "no intersection at s = " << s_star;
    raise(ErrorCode::NoCrossing, os.str());
  }
  const Mat& bstar = fstar.basis();
  const Mat w = intersection_basis(fstar, z, k);
  const Mat wa = bstar.adjoint() * w;

  double step = h > 0.0 ? h : opts.fd_rel_step * (path.b() - path.a());
  Mat deriv;
  bool agreed = false;
  for (int attempt = 0; attempt <= opts.fd_retries && !agreed; ++attempt, step *= 0.1) {
    try {
      const Mat d1 = graph_derivative(path, bstar, s_star, step);
      const Mat d2 = graph_derivative(path, bstar, s_star, 0.5 * step);
      deriv = (4.0 * d2 - d1) / 3.0;
      const double diff = (d1 - d2).norm();
      agreed = diff <= opts.fd_rel_agreement * deriv.norm() || diff <= 1e-12;
    } catch (const MaslovError& e) {
      if (e.code() != ErrorCode::NotGraphRepresentable) throw;
    }
  }
  if (!agreed) raise(ErrorCode::NotGraphRepresentable, "finite-difference derivative of the graph map did not settle");

  const Mat rw = deriv * wa;
  const Mat form = linalg::hermitian_part(rw.adjoint() * z.space()->J() * w);
  const RVec mu = linalg::hermitian_eigenvalues(form);

  CrossingReport rep;
  rep.location = s_star;
  rep.intersection_dim = k;
  const double scale = mu.cwiseAbs().maxCoeff();
  const double band = std::max(opts.degeneracy_rel * scale, opts.degeneracy_abs);
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    rep.form_eigenvalues.push_back(mu(i));
    if (mu(i) > band) {
      ++rep.n_plus;
    } else if (mu(i) < -band) {
      ++rep.n_minus;
    } else {
      rep.regular = false;
    }
  }
  rep.signature = rep.n_plus - rep.n_minus;
  return rep;
}

std::vector<double> locate_crossings(const LagrangianPath& path, const LagrangianPlane& z, const MaslovOptions& opts) {
  const int n = std::max(opts.locator_points, 2);
  const double a = path.a(), b = path.b();
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  grid.back() = b;
  auto mus = parallel::map(
      grid.size(), [&](std::size_t i) { return take_sample(path, z, grid[i]).mu; }, opts.parallel);

  std::vector<double> found;
  const double detect = opts.locator_detect;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (Eigen::Index p = 0; p < mus[i].size(); ++p)
      if (std::abs(std::arg(mus[i](p))) <= detect) {
        found.push_back(grid[i]);
        break;
      }

  struct Bracket {
    double s0, s1;
    Vec mu0;
    Eigen::Index idx;
  };
  std::vector<Bracket> brackets;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const auto assign = linalg::optimal_assignment(angular_cost(mus[i], mus[i + 1]));
    for (std::size_t p = 0; p < assign.size(); ++p) {
      const double a1 = std::arg(mus[i](static_cast<Eigen::Index>(p)));
      const double a2 = std::arg(mus[i + 1](assign[p]));
      if (std::abs(a1) <= detect || std::abs(a2) <= detect) continue;
      if (std::abs(a1) >= 0.5 * kPi || std::abs(a2) >= 0.5 * kPi) continue;
      if ((a1 < 0) != (a2 < 0)) brackets.push_back({grid[i], grid[i + 1], mus[i], static_cast<Eigen::Index>(p)});
    }
  }

  auto refined = parallel::map(
      brackets.size(),
      [&](std::size_t bi) {
        Bracket br = brackets[bi];
        const bool left_negative = std::arg(br.mu0(br.idx)) < 0;
        for (int it = 0; it < 80 && br.s1 - br.s0 > 1e-15 * (b - a); ++it) {
          const double mid = 0.5 * (br.s0 + br.s1);
          const Vec mu = take_sample(path, z, mid).mu;
          const auto assign = linalg::optimal_assignment(angular_cost(br.mu0, mu));
          const Eigen::Index j = assign[static_cast<std::size_t>(br.idx)];
          const double am = std::arg(mu(j));
          if (am == 0.0) return mid;
          if ((am < 0) == left_negative) {
            br.s0 = mid;
            br.mu0 = mu;
            br.idx = j;
          } else {
            br.s1 = mid;
          }
        }
        return 0.5 * (br.s0 + br.s1);
      },
      opts.parallel);
  found.insert(found.end(), refined.begin(), refined.end());

  std::sort(found.begin(), found.end());
  std::vector<double> merged;
  for (double s : found)
    if (merged.empty() || s - merged.back() > opts.merge_rel * (b - a)) merged.push_back(s);
  return merged;
}

std::vector<CrossingReport> crossing_inventory(const LagrangianPath& path, const LagrangianPlane& z,
                                               const MaslovOptions& opts) {
  const auto locations = locate_crossings(path, z, opts);
  return parallel::map(
      locations.size(), [&](std::size_t i) { return crossing_form(path, z, locations[i], 0.0, opts); },
      opts.parallel);
}

MaslovResult maslov_via_crossings(const LagrangianPath& path, const LagrangianPlane& z,
                                  const std::vector<double>& locations, const MaslovOptions& opts) {
  MaslovResult result;
  result.method = MaslovMethod::crossing_form;
  result.crossings = parallel::map(
      locations.size(), [&](std::size_t i) { return crossing_form(path, z, locations[i], 0.0, opts); },
      opts.parallel);
  const double edge = opts.merge_rel * (path.b() - path.a());
  for (const auto& c : result.crossings) {
    if (!c.regular) {
      std::ostringstream os;
      os << "degenerate crossing form at s = " << c.location;
      raise(ErrorCode::IrregularCrossing, os.str());
    }
    if (c.location - path.a() <= edge) {
      result.index -= c.n_minus;
    } else if (path.b() - c.location <= edge) {
      result.index += c.n_plus;
    } else {
      result.index += c.signature;
    }
  }
  return result;
}

}  // namespace maslov
