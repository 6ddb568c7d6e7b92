#include "maslov/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <sstream>

#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "maslov/errors.hpp"

namespace maslov {

namespace {

/// Hermitian matrix in LAPACK upper band storage.
class BandMatrix {
 public:
  BandMatrix(int n, int kd) : n_(n), kd_(kd), ab_(static_cast<std::size_t>(n) * (kd + 1), cplx(0.0, 0.0)) {}

  /// Adds value at (r, c) of the full Hermitian matrix; the lower triangle is implied.
  void add(int r, int c, cplx value) {
    if (r > c) return;
    if (c - r > kd_) raise(ErrorCode::EigensolverFailure, "entry outside the band");
    ab_[static_cast<std::size_t>(kd_ + r - c) + static_cast<std::size_t>(c) * (kd_ + 1)] += value;
  }

  std::vector<double> lowest(int count) {
    const int iu = std::min(count, n_);
    std::vector<double> w(static_cast<std::size_t>(n_));
    std::vector<lapack_int> ifail(static_cast<std::size_t>(n_));
    cplx q_dummy(0.0, 0.0), z_dummy(0.0, 0.0);
    lapack_int found = 0;
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    const lapack_int info =
        LAPACKE_zhbevx(LAPACK_COL_MAJOR, 'N', 'I', 'U', n_, kd_, ab_.data(), kd_ + 1, &q_dummy, 1, 0.0, 0.0, 1, iu,
                       abstol, &found, w.data(), &z_dummy, 1, ifail.data());
    if (info != 0 || found != iu) {
      std::ostringstream os;
      os << "zhbevx returned info = " << info << ", found " << found << " of " << iu;
      raise(ErrorCode::EigensolverFailure, os.str());
    }
    w.resize(static_cast<std::size_t>(iu));
    return w;
  }

 private:
  int n_;
  int kd_;
  std::vector<cplx> ab_;
};

/// Lowest `count` eigenvalues of the real symmetric tridiagonal matrix with diagonal d and off-diagonal e.
std::vector<double> lowest_tridiagonal(std::vector<double>& d, std::vector<double>& e, int count) {
  const lapack_int n = static_cast<lapack_int>(d.size());
  const lapack_int iu = std::min<lapack_int>(count, n);
  std::vector<double> w(d.size());
  std::vector<lapack_int> iblock(d.size()), isplit(d.size());
  lapack_int found = 0, nsplit = 0;
  const lapack_int info = LAPACKE_dstebz('I', 'E', n, 0.0, 0.0, 1, iu, 2.0 * LAPACKE_dlamch('S'), d.data(), e.data(),
                                         &found, &nsplit, w.data(), iblock.data(), isplit.data());
  if (info != 0 || found != iu) {
    std::ostringstream os;
    os << "dstebz returned info = " << info << ", found " << found << " of " << iu;
    raise(ErrorCode::EigensolverFailure, os.str());
  }
  w.resize(static_cast<std::size_t>(iu));
  return w;
}

/// Folded ordering 0, M-1, 1, M-2, ... keeps nearest neighbours and the wrap pair within two slots.
int folded_position(int l, int count) { return l < (count + 1) / 2 ? 2 * l : 2 * (count - 1 - l) + 1; }

}  // namespace

std::vector<double> fd_eigenvalues(const Potential1D& v, const ExtensionPlane& g, int grid, int count) {
  if (grid < 200) raise(ErrorCode::ConfigError, "oracle grid must be at least 200");
  if (v.size() != g.m) raise(ErrorCode::ConfigError, "potential and extension sizes differ");
  const int m = g.m;
  const int n = grid;
  const double h = 1.0 / n;
  const double inv_h2 = 1.0 / (h * h);

  int first = 0, nodes = 0;
  switch (g.kind) {
    case ExtensionKind::dirichlet: first = 1; nodes = n - 1; break;
    case ExtensionKind::neumann:
    case ExtensionKind::robin: first = 0; nodes = n + 1; break;
    case ExtensionKind::theta_periodic: first = 0; nodes = n; break;
  }
  const bool ghost = g.kind == ExtensionKind::neumann || g.kind == ExtensionKind::robin;
  auto weight = [&](int l) { return ghost && (l == 0 || l == nodes - 1) ? 0.5 : 1.0; };
  std::map<std::pair<int, int>, Mat> blocks;
  auto add_block = [&](int l, int k, const Mat& blk) {
    const double s = 1.0 / std::sqrt(weight(l) * weight(k));
    auto [it, fresh] = blocks.try_emplace({l, k}, Mat::Zero(m, m));
    it->second += s * blk;
  };
  const Mat id = Mat::Identity(m, m);

  for (int l = 0; l < nodes; ++l) {
    const double x = (first + l) * h;
    const bool edge = ghost && (l == 0 || l == nodes - 1);
    Mat diag = (edge ? inv_h2 : 2.0 * inv_h2) * id + (edge ? 0.5 : 1.0) * v(x);
    add_block(l, l, diag);
    if (l + 1 < nodes) {
      add_block(l, l + 1, -inv_h2 * id);
      add_block(l + 1, l, -inv_h2 * id);
    }
  }
  if (g.kind == ExtensionKind::robin) {
    // Theta acts on (u(1), u(0)); node 0 carries u(0), node `nodes - 1` carries u(1).
    const Mat& th = g.theta_matrix;
    const int l0 = 0, l1 = nodes - 1;
    add_block(l1, l1, th.topLeftCorner(m, m) / h);
    add_block(l1, l0, th.topRightCorner(m, m) / h);
    add_block(l0, l1, th.bottomLeftCorner(m, m) / h);
    add_block(l0, l0, th.bottomRightCorner(m, m) / h);
  }
  if (g.kind == ExtensionKind::theta_periodic) {
    const cplx ph = std::exp(kI * g.theta);
    add_block(nodes - 1, 0, (-ph * inv_h2) * id);
    add_block(0, nodes - 1, (-std::conj(ph) * inv_h2) * id);
  }

  bool tridiagonal = m == 1;
  for (const auto& [key, blk] : blocks) {
    if (!tridiagonal) break;
    const bool zero = blk.cwiseAbs().maxCoeff() == 0.0;
    if (!zero && (std::abs(key.first - key.second) > 1 || blk(0, 0).imag() != 0.0)) tridiagonal = false;
  }
  if (tridiagonal) {
    std::vector<double> d(static_cast<std::size_t>(nodes), 0.0), e(static_cast<std::size_t>(nodes - 1), 0.0);
    for (const auto& [key, blk] : blocks) {
      if (key.first == key.second) d[static_cast<std::size_t>(key.first)] += blk(0, 0).real();
      else if (key.second == key.first + 1) e[static_cast<std::size_t>(key.first)] += blk(0, 0).real();
    }
    return lowest_tridiagonal(d, e, count);
  }

  BandMatrix band(nodes * m, 3 * m - 1);
  for (const auto& [key, blk] : blocks)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        const int r = folded_position(key.first, nodes) * m + a, c = folded_position(key.second, nodes) * m + b;
        if (r <= c) band.add(r, c, blk(a, b));
      }
  return band.lowest(count);
}

SpectrumResult oracle_spectrum(const Potential1D& v, const ExtensionPlane& g, const OracleOptions& opts) {
  SpectrumResult out;
  out.grid = opts.grid;
  out.order = 2;
  int count = std::max(opts.count, 1);
  const double eps = std::numeric_limits<double>::epsilon();
  const double roundoff = 10.0 * eps * (16.0 * opts.grid * opts.grid + v.sup_norm());
  const int max_count = g.m * (opts.grid - 1);
  for (;;) {
    const auto coarse = fd_eigenvalues(v, g, opts.grid, count);
    const auto fine = fd_eigenvalues(v, g, 2 * opts.grid, count);
    const std::size_t k = std::min(coarse.size(), fine.size());
    out.eigenvalues.assign(k, 0.0);
    out.bands.assign(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      const double r = (4.0 * fine[j] - coarse[j]) / 3.0;
      out.eigenvalues[j] = r;
      out.bands[j] = std::abs(coarse[j] - fine[j]) + opts.band_floor * (1.0 + std::abs(r)) + roundoff;
    }
    if (out.eigenvalues.back() > out.bands.back() || count >= max_count) break;
    count = std::min(2 * count, max_count);
  }
  out.morse_index = 0;
  out.ambiguous = false;
  double nearest = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < out.eigenvalues.size(); ++j) {
    const double r = out.eigenvalues[j];
    if (r < -out.bands[j]) ++out.morse_index;
    if (std::abs(r) <= out.bands[j]) out.ambiguous = true;
    if (std::abs(r) < nearest) {
      nearest = std::abs(r);
      out.tolerance = out.bands[j];
    }
  }
  if (out.ambiguous && !opts.allow_ambiguous) {
    std::ostringstream os;
    os << "an eigenvalue lies within " << out.tolerance
       << " of zero; retry at a shifted spectral parameter or a nearby extension parameter";
    raise(ErrorCode::MorseAmbiguous, os.str());
  }
  return out;
}

int oracle_multiplicity(const SpectrumResult& spec, double lambda) {
  int k = 0;
  for (std::size_t j = 0; j < spec.eigenvalues.size(); ++j)
    if (std::abs(spec.eigenvalues[j] - lambda) <= 10.0 * spec.bands[j] + 1e-8 * (1.0 + std::abs(lambda))) ++k;
  return k;
}

}  // namespace maslov
