#include "maslov/band.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "maslov/errors.hpp"
#include "maslov/maslov.hpp"
#include "maslov/parallel.hpp"
#include "maslov/schrodinger1d.hpp"

namespace maslov {

namespace {

std::vector<int> negated(const std::vector<int>& k) {
  std::vector<int> out(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) out[j] = -k[j];
  return out;
}

/// Lexicographic offset of p in the box [-r, r]^n.
std::size_t box_index(const std::vector<int>& p, int r) {
  std::size_t idx = 0;
  const std::size_t side = static_cast<std::size_t>(2 * r + 1);
  for (int pj : p) idx = idx * side + static_cast<std::size_t>(pj + r);
  return idx;
}

/// All integer vectors in [-r, r]^n in lexicographic order.
std::vector<std::vector<int>> box(int n, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> k(static_cast<std::size_t>(n), -r);
  for (;;) {
    out.push_back(k);
    int j = n - 1;
    while (j >= 0 && k[static_cast<std::size_t>(j)] == r) k[static_cast<std::size_t>(j--)] = -r;
    if (j < 0) break;
    ++k[static_cast<std::size_t>(j)];
  }
  return out;
}

/// int_0^1 exp(2 pi i alpha s) ds.
cplx unit_integral(double alpha) {
  if (std::abs(alpha) < 1e-14) return 1.0;
  const cplx z = 2.0 * kPi * kI * alpha;
  return (std::exp(z) - 1.0) / z;
}

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Trapezoid transform of samples on the (P+1)^n grid to coefficients on [-R, R]^n, one axis at a time.
/// Samples are stored row-major as (grid point, m x m entry).
std::vector<cplx> trapezoid_transform(std::vector<cplx> data, int n, int intervals, int r, int mm) {
  const int pts = intervals + 1;
  const int side = 2 * r + 1;
  RowMat phase(side, pts);
  for (int p = -r; p <= r; ++p)
    for (int i = 0; i < pts; ++i) {
      const double w = (i == 0 || i == intervals ? 0.5 : 1.0) / intervals;
      phase(p + r, i) = w * std::exp(-2.0 * kPi * kI * (static_cast<double>(p) * i / intervals));
    }
  std::vector<Eigen::Index> shape(static_cast<std::size_t>(n), pts);
  for (int axis = 0; axis < n; ++axis) {
    Eigen::Index outer = 1, inner = mm;
    for (int j = 0; j < axis; ++j) outer *= shape[static_cast<std::size_t>(j)];
    for (int j = axis + 1; j < n; ++j) inner *= shape[static_cast<std::size_t>(j)];
    std::vector<cplx> next(static_cast<std::size_t>(outer * side * inner));
    for (Eigen::Index o = 0; o < outer; ++o) {
      Eigen::Map<const RowMat> in(data.data() + o * pts * inner, pts, inner);
      Eigen::Map<RowMat> out(next.data() + o * side * inner, side, inner);
      out.noalias() = phase * in;
    }
    data = std::move(next);
    shape[static_cast<std::size_t>(axis)] = side;
  }
  return data;
}

}  // namespace

LatticeCell LatticeCell::create(const RMat& basis, const RVec& theta) {
  if (basis.rows() != basis.cols() || basis.rows() < 1) raise(ErrorCode::ConfigError, "cell basis must be square");
  if (theta.size() != basis.cols()) raise(ErrorCode::ConfigError, "theta must have one entry per basis vector");
  for (Eigen::Index j = 0; j < theta.size(); ++j)
    if (!(theta(j) >= 0.0 && theta(j) < 1.0)) raise(ErrorCode::ConfigError, "theta entries must lie in [0, 1)");
  LatticeCell c;
  c.basis_ = basis;
  c.theta_ = theta;
  c.volume_ = std::abs(basis.determinant());
  if (!(c.volume_ > 1e-12 * std::pow(basis.norm(), static_cast<double>(basis.cols()))))
    raise(ErrorCode::ConfigError, "cell basis vectors are linearly dependent");
  c.dual_ = 2.0 * kPi * basis.inverse();
  return c;
}

LatticeCell LatticeCell::unit_interval(double theta) { return create(RMat::Identity(1, 1), RVec::Constant(1, theta)); }

LatticeCell LatticeCell::unit_square(double theta1, double theta2) {
  RVec th(2);
  th << theta1, theta2;
  return create(RMat::Identity(2, 2), th);
}

double LatticeCell::kinetic(const std::vector<int>& k) const {
  RVec d = theta_;
  for (Eigen::Index j = 0; j < d.size(); ++j) d(j) -= k[static_cast<std::size_t>(j)];
  return (dual_.transpose() * d).squaredNorm();
}

FourierPotential::FourierPotential(int n, int m, std::vector<FourierMode> modes) : n_(n), m_(m) {
  if (n < 1 || m < 1) raise(ErrorCode::ConfigError, "potential dimensions must be positive");
  std::map<std::vector<int>, Mat> merged;
  for (auto& mode : modes) {
    if (static_cast<int>(mode.k.size()) != n) raise(ErrorCode::ConfigError, "mode index has the wrong dimension");
    if (mode.coeff.rows() != m || mode.coeff.cols() != m) raise(ErrorCode::ConfigError, "mode coefficient has the wrong size");
    auto [it, fresh] = merged.try_emplace(mode.k, Mat::Zero(m, m));
    it->second += mode.coeff;
  }
  for (const auto& [k, c] : merged) {
    const auto partner = merged.find(negated(k));
    const double scale = 1e-12 * (1.0 + c.norm());
    if (partner == merged.end() ? c.norm() > scale : (partner->second - c.adjoint()).norm() > scale)
      raise(ErrorCode::NotHermitian, "Fourier coefficients must satisfy c(-k) = c(k)^*");
  }
  for (auto& [k, c] : merged) modes_.push_back({k, c});
}

FourierPotential FourierPotential::zero(int n, int m) { return FourierPotential(n, m, {}); }

FourierPotential FourierPotential::constant(int n, const Mat& value) {
  return FourierPotential(n, static_cast<int>(value.rows()), {{std::vector<int>(static_cast<std::size_t>(n), 0), value}});
}

Mat FourierPotential::at_cell_coords(const RVec& s) const {
  Mat out = Mat::Zero(m_, m_);
  for (const auto& mode : modes_) {
    double arg = 0.0;
    for (int j = 0; j < n_; ++j) arg += mode.k[static_cast<std::size_t>(j)] * s(j);
    out += std::exp(2.0 * kPi * kI * arg) * mode.coeff;
  }
  return 0.5 * (out + out.adjoint());
}

Mat FourierPotential::at_origin() const { return at_cell_coords(RVec::Zero(n_)); }

double FourierPotential::sup_bound() const {
  double s = 0.0;
  for (const auto& mode : modes_) s += Eigen::JacobiSVD<Mat>(mode.coeff).singularValues()(0);
  return s;
}

FourierTruncation FourierTruncation::create(int n, int m, int cutoff) {
  if (cutoff < 1) raise(ErrorCode::ConfigError, "Fourier cutoff must be positive");
  FourierTruncation t;
  t.cutoff = cutoff;
  t.dim = n;
  t.m = m;
  t.modes = box(n, cutoff);
  return t;
}

ScaledFamily::ScaledFamily(LatticeCell c, FourierPotential v) : cell(std::move(c)), potential(std::move(v)) {
  if (cell.dim() != potential.dim()) raise(ErrorCode::ConfigError, "cell and potential dimensions differ");
}

std::vector<double> exact_laplacian_spectrum(const LatticeCell& cell, int count, int m) {
  if (count < 1 || m < 1) raise(ErrorCode::ConfigError, "count and m must be positive");
  const int n = cell.dim();
  const double smin = Eigen::JacobiSVD<RMat>(cell.dual()).singularValues().minCoeff();
  const double theta_max = cell.theta().cwiseAbs().maxCoeff();
  for (int r = 1;; ++r) {
    std::vector<double> vals;
    for (const auto& k : box(n, r)) {
      const double e = cell.kinetic(k);
      for (int a = 0; a < m; ++a) vals.push_back(e);
    }
    std::sort(vals.begin(), vals.end());
    // Every k outside the box has some |k_j| >= r + 1.
    const double outside = std::pow(smin * (r + 1 - theta_max), 2);
    if (static_cast<int>(vals.size()) >= count && vals[static_cast<std::size_t>(count - 1)] < outside) {
      vals.resize(static_cast<std::size_t>(count));
      return vals;
    }
  }
}

std::vector<Mat> scaled_coefficients(const ScaledFamily& family, double t, int cutoff, CoefficientRule rule) {
  if (!(t > 0.0 && t <= 1.0)) raise(ErrorCode::ConfigError, "t must lie in (0, 1]");
  const int n = family.cell.dim();
  const int m = family.potential.size();
  const int r = 2 * cutoff;
  std::vector<Mat> out;
  if (rule == CoefficientRule::exact) {
    const auto ps = box(n, r);
    out.assign(ps.size(), Mat::Zero(m, m));
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (const auto& mode : family.potential.modes()) {
        cplx f = 1.0;
        for (int j = 0; j < n; ++j)
          f *= unit_integral(t * mode.k[static_cast<std::size_t>(j)] - ps[i][static_cast<std::size_t>(j)]);
        out[i] += f * mode.coeff;
      }
  } else {
    const int intervals = 8 * (2 * cutoff + 1);
    const int pts = intervals + 1;
    const int mm = m * m;
    std::size_t total = 1;
    for (int j = 0; j < n; ++j) total *= static_cast<std::size_t>(pts);
    std::vector<cplx> samples(total * static_cast<std::size_t>(mm));
    RVec s(n);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rem = flat;
      for (int j = n - 1; j >= 0; --j) {
        s(j) = t * static_cast<double>(rem % static_cast<std::size_t>(pts)) / intervals;
        rem /= static_cast<std::size_t>(pts);
      }
      const Mat v = family.potential.at_cell_coords(s);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) samples[flat * static_cast<std::size_t>(mm) + static_cast<std::size_t>(a * m + b)] = v(a, b);
    }
    const auto flat = trapezoid_transform(std::move(samples), n, intervals, r, mm);
    out.assign(flat.size() / static_cast<std::size_t>(mm), Mat(m, m));
    for (std::size_t i = 0; i < out.size(); ++i)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) out[i](a, b) = flat[i * static_cast<std::size_t>(mm) + static_cast<std::size_t>(a * m + b)];
  }
  for (const auto& c : out)
    if (!c.allFinite()) raise(ErrorCode::QuadratureFailure, "non-finite Fourier coefficient of V(t .)");
  return out;
}

Mat galerkin_matrix(const ScaledFamily& family, double t, const FourierTruncation& trunc, CoefficientRule rule) {
  const int m = family.potential.size();
  if (trunc.m != m || trunc.dim != family.cell.dim()) raise(ErrorCode::ConfigError, "truncation does not match the family");
  const auto coeffs = scaled_coefficients(family, t, trunc.cutoff, rule);
  const int nm = static_cast<int>(trunc.modes.size());
  Mat h = Mat::Zero(nm * m, nm * m);
  std::vector<int> p(static_cast<std::size_t>(trunc.dim));
  for (int a = 0; a < nm; ++a) {
    const auto& ka = trunc.modes[static_cast<std::size_t>(a)];
    for (int b = 0; b < nm; ++b) {
      const auto& kb = trunc.modes[static_cast<std::size_t>(b)];
      for (int j = 0; j < trunc.dim; ++j)
        p[static_cast<std::size_t>(j)] = kb[static_cast<std::size_t>(j)] - ka[static_cast<std::size_t>(j)];
      h.block(a * m, b * m, m, m) = coeffs[box_index(p, 2 * trunc.cutoff)];
    }
    h.block(a * m, a * m, m, m) += (family.cell.kinetic(ka) / (t * t)) * Mat::Identity(m, m);
  }
  return 0.5 * (h + h.adjoint());
}

namespace {

MorseRow evaluate_row(const ScaledFamily& family, double t, const FourierTruncation& trunc,
                      const std::optional<FourierTruncation>& doubled, const BandOptions& opts) {
  MorseRow row;
  row.t = t;
  const Mat h = galerkin_matrix(family, t, trunc, opts.rule);
  const int dim = static_cast<int>(h.rows());
  int want = std::max(opts.track_count, 1);
  RVec ev = linalg::lowest_hermitian_eigenvalues(h, want);
  while (ev.size() < dim && ev(ev.size() - 1) <= opts.zero_tol) {
    want *= 2;
    ev = linalg::lowest_hermitian_eigenvalues(h, want);
  }
  row.morse = static_cast<int>((ev.array() < -opts.zero_tol).count());
  row.lowest.assign(ev.data(), ev.data() + ev.size());
  if (doubled) {
    row.morse_doubled = linalg::count_hermitian_below(galerkin_matrix(family, t, *doubled, opts.rule), -opts.zero_tol);
    if (*row.morse_doubled != row.morse) {
      std::ostringstream os;
      os << "Morse index " << row.morse << " at K = " << trunc.cutoff << " but " << *row.morse_doubled << " at K = "
         << doubled->cutoff << " (t = " << t << ")";
      raise(ErrorCode::TruncationNotConverged, os.str());
    }
  }
  return row;
}

MorseTable build_table(std::vector<MorseRow> rows, const BandOptions& opts) {
  MorseTable table;
  std::size_t keep = static_cast<std::size_t>(std::max(opts.track_count, 1));
  std::size_t available = rows.front().lowest.size();
  for (const auto& r : rows) {
    keep = std::max(keep, static_cast<std::size_t>(r.morse) + 4);
    available = std::min(available, r.lowest.size());
  }
  keep = std::min(keep, available);
  EigenTracks raw;
  for (auto& r : rows) {
    r.lowest.resize(keep);
    raw.t.push_back(r.t);
    raw.values.push_back(r.lowest);
  }
  table.tracks = match_tracks(raw);
  table.rows = std::move(rows);
  return table;
}

std::optional<FourierTruncation> doubled_of(const FourierTruncation& trunc, const BandOptions& opts) {
  if (!opts.check_doubling) return std::nullopt;
  return FourierTruncation::create(trunc.dim, trunc.m, 2 * trunc.cutoff);
}

}  // namespace

MorseTable morse_vs_t(const ScaledFamily& family, const std::vector<double>& t_grid, const FourierTruncation& trunc,
                      const BandOptions& opts) {
  if (t_grid.empty()) raise(ErrorCode::ConfigError, "empty t grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0 && t_grid[i] <= 1.0)) raise(ErrorCode::ConfigError, "t grid must lie in (0, 1]");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) raise(ErrorCode::ConfigError, "t grid must be increasing");
  }
  const auto doubled = doubled_of(trunc, opts);
  auto rows = parallel::map(
      t_grid.size(), [&](std::size_t i) { return evaluate_row(family, t_grid[i], trunc, doubled, opts); }, opts.parallel);
  return build_table(std::move(rows), opts);
}

MorseTable morse_sweep(const ScaledFamily& family, double tau, const FourierTruncation& trunc, const BandOptions& opts) {
  if (!(tau > 0.0 && tau < 1.0)) raise(ErrorCode::ConfigError, "tau must lie in (0, 1)");
  const int n = std::max(opts.grid_points, 2);
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = tau + (1.0 - tau) * i / (n - 1);
  grid.back() = 1.0;
  const auto doubled = doubled_of(trunc, opts);
  auto first = parallel::map(
      grid.size(), [&](std::size_t i) { return evaluate_row(family, grid[i], trunc, doubled, opts); }, opts.parallel);
  std::map<double, MorseRow> rows;
  for (auto& r : first) rows.emplace(r.t, std::move(r));
  for (int level = 0; level < opts.refine_depth; ++level) {
    std::vector<double> mids;
    for (auto it = rows.begin(); std::next(it) != rows.end(); ++it) {
      const auto nx = std::next(it);
      if (it->second.morse != nx->second.morse) mids.push_back(0.5 * (it->first + nx->first));
    }
    if (mids.empty()) break;
    auto added = parallel::map(
        mids.size(), [&](std::size_t i) { return evaluate_row(family, mids[i], trunc, doubled, opts); }, opts.parallel);
    for (auto& r : added) rows.emplace(r.t, std::move(r));
  }
  std::vector<MorseRow> ordered;
  for (auto& [t, r] : rows) ordered.push_back(std::move(r));
  return build_table(std::move(ordered), opts);
}

namespace {

int one_dimensional_maslov(const ScaledFamily& family, double tau, const BandOptions& opts) {
  const double a = family.cell.basis()(0, 0);
  const int m = family.potential.size();
  const FourierPotential v = family.potential;
  const auto plane_at = [v, a, m, steps = opts.ode_steps](double t) {
    const double scale = t * t * a * a;
    const Potential1D w(m, [v, t, scale](double y) { return Mat(scale * v.at_cell_coords(RVec::Constant(1, t * y))); });
    return TraceIntegrator(w, steps).plane(0.0);
  };
  const LagrangianPath path(tau, 1.0, plane_at);
  const auto g = theta_periodic_plane(m, 2.0 * kPi * family.cell.theta()(0));
  MaslovOptions mo;
  mo.parallel = opts.parallel;
  return maslov_index(path, g.plane, mo).index;
}

}  // namespace

Y19Report verify_y19(const ScaledFamily& family, double tau, const FourierTruncation& trunc, const BandOptions& opts) {
  Y19Report rep;
  rep.tau = tau;
  rep.table = morse_sweep(family, tau, trunc, opts);
  rep.morse_tau = rep.table.rows.front().morse;
  rep.morse_one = rep.table.rows.back().morse;
  rep.spectral_flow = spectral_flow(rep.table.tracks, 0.0, opts.zero_tol);
  rep.y21_holds = rep.morse_tau - rep.morse_one == rep.spectral_flow;

  const auto doubled = doubled_of(trunc, opts);
  std::vector<std::pair<double, int>> history;
  for (double s = tau;; s *= 0.5) {
    if (s < opts.tau_min) {
      std::ostringstream os;
      os << "Morse index did not settle for tau >= " << opts.tau_min;
      raise(ErrorCode::TauNotSmallEnough, os.str());
    }
    history.emplace_back(s, s == tau ? rep.morse_tau : evaluate_row(family, s, trunc, doubled, opts).morse);
    const std::size_t k = static_cast<std::size_t>(std::max(opts.stable_repeats, 1));
    if (history.size() >= k) {
      const auto tail = history.end() - static_cast<std::ptrdiff_t>(k);
      if (std::all_of(tail, history.end(), [&](const auto& h) { return h.second == tail->second; })) {
        rep.tau0 = tail->first;
        rep.morse_small = tail->second;
        break;
      }
    }
  }

  bool ok = rep.y21_holds;
  if (!family.cell.theta_is_zero()) {
    rep.spectral_flow_tau0 =
        rep.tau0 == tau ? rep.spectral_flow : spectral_flow(morse_sweep(family, rep.tau0, trunc, opts).tracks, 0.0, opts.zero_tol);
    rep.y22_holds = rep.morse_small == 0 && rep.morse_one == -rep.spectral_flow_tau0;
    ok = ok && *rep.y22_holds;
  } else {
    const RVec v0 = linalg::hermitian_eigenvalues(family.potential.at_origin());
    if (v0.cwiseAbs().minCoeff() < 1e-12) raise(ErrorCode::ConfigError, "V(0) must be invertible for the theta = 0 branch");
    rep.morse_v0 = static_cast<int>((v0.array() < 0.0).count());
    rep.y23_holds = rep.morse_small == rep.morse_v0;
    ok = ok && *rep.y23_holds;
  }

  if (opts.maslov_side && family.cell.dim() == 1) {
    rep.maslov_1d = one_dimensional_maslov(family, tau, opts);
    ok = ok && *rep.maslov_1d == rep.spectral_flow;
  }
  rep.pass = ok;
  return rep;
}

}  // namespace maslov
