#include "maslov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "maslov/errors.hpp"

namespace maslov::linalg {

int numerical_rank(const RVec& sv, double rel) {
  if (sv.size() == 0) return 0;
  const double top = sv.maxCoeff();
  if (top == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel * top) ++r;
  return r;
}

Mat orthonormalize(const Mat& columns, double rel) {
  if (columns.cols() == 0) return columns;
  Eigen::JacobiSVD<Mat> svd(columns);
  const int r = numerical_rank(svd.singularValues(), rel);
  if (r < columns.cols())
    raise(ErrorCode::RankDeficient, "column rank " + std::to_string(r) + " < " + std::to_string(columns.cols()));
  Eigen::HouseholderQR<Mat> qr(columns);
  Mat q = qr.householderQ() * Mat::Identity(columns.rows(), columns.cols());
  return q;
}

Mat range_basis(const Mat& columns, double rel) {
  if (columns.cols() == 0) return Mat(columns.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(columns, Eigen::ComputeThinU);
  const int r = numerical_rank(svd.singularValues(), rel);
  return svd.matrixU().leftCols(r);
}

Mat null_space(const Mat& a, double rel) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  RVec sv = svd.singularValues();
  // Treat an all-zero operator as having full kernel regardless of the relative rule.
  const int r = sv.size() > 0 && sv.maxCoeff() > std::numeric_limits<double>::min() ? numerical_rank(sv, rel) : 0;
  return svd.matrixV().rightCols(n - r);
}

Mat projector(const Mat& q) { return q * q.adjoint(); }

RVec principal_sines(const Mat& b1, const Mat& b2) {
  Mat resid = b1 - b2 * (b2.adjoint() * b1);
  Eigen::JacobiSVD<Mat> svd(resid);
  RVec s = svd.singularValues();
  std::sort(s.data(), s.data() + s.size());
  return s;
}

double gap_metric(const Mat& b1, const Mat& b2) {
  if (b1.cols() == 0) return 0.0;
  Mat resid = b1 - b2 * (b2.adjoint() * b1);
  Eigen::JacobiSVD<Mat> svd(resid);
  return svd.singularValues()(0);
}

bool same_span(const Mat& b1, const Mat& b2, double tol) {
  if (b1.rows() != b2.rows() || b1.cols() != b2.cols()) return false;
  return gap_metric(b1, b2) <= tol && gap_metric(b2, b1) <= tol;
}

Vec unit_eigenvalues(const Mat& w) {
  Eigen::ComplexEigenSolver<Mat> es(w, false);
  if (es.info() != Eigen::Success) raise(ErrorCode::EigensolverFailure, "complex eigensolver did not converge");
  Vec mu = es.eigenvalues();
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double r = std::abs(mu(i));
    mu(i) = r > 0 ? mu(i) / r : cplx(1.0, 0.0);
  }
  return mu;
}

Mat hermitian_part(const Mat& m) { return 0.5 * (m + m.adjoint()); }

RVec hermitian_eigenvalues(const Mat& h) {
  if (h.rows() == 0) return RVec(0);
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) raise(ErrorCode::EigensolverFailure, "Hermitian eigensolver did not converge");
  return es.eigenvalues();
}

namespace {

RVec zheevr_values(const Mat& h, char range, double vl, double vu, int il, int iu) {
  const lapack_int n = static_cast<lapack_int>(h.rows());
  Mat a = h;
  RVec w(n);
  lapack_int found = 0;
  cplx z_dummy(0.0, 0.0);
  std::vector<lapack_int> isuppz(static_cast<std::size_t>(2 * std::max<lapack_int>(n, 1)));
  const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'N', range, 'U', n, a.data(), n, vl, vu, il, iu,
                                         2.0 * LAPACKE_dlamch('S'), &found, w.data(), &z_dummy, 1, isuppz.data());
  if (info != 0) raise(ErrorCode::EigensolverFailure, "zheevr did not converge");
  return w.head(found);
}

}  // namespace

RVec lowest_hermitian_eigenvalues(const Mat& h, int count) {
  const int n = static_cast<int>(h.rows());
  if (n == 0 || count <= 0) return RVec(0);
  return zheevr_values(h, 'I', 0.0, 0.0, 1, std::min(count, n));
}

int count_hermitian_below(const Mat& h, double level) {
  const lapack_int n = static_cast<lapack_int>(h.rows());
  if (n == 0) return 0;
  Mat a = h;
  a.diagonal().array() -= level;
  std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_zhetrf(LAPACK_COL_MAJOR, 'U', n, a.data(), n, ipiv.data());
  if (info < 0) raise(ErrorCode::EigensolverFailure, "zhetrf rejected its arguments");
  int negative = 0;
  for (lapack_int k = 0; k < n; ++k) {
    if (ipiv[static_cast<std::size_t>(k)] > 0) {
      negative += a(k, k).real() < 0.0;
    } else {
      // A 2 x 2 pivot block always has one eigenvalue of each sign.
      ++negative;
      ++k;
    }
  }
  return negative;
}

double angular_distance(cplx a, cplx b) { return std::abs(std::arg(a * std::conj(b))); }

std::vector<int> optimal_assignment(const RMat& cost) {
  // Shortest augmenting path (Hungarian) with potentials, 1-based internal indexing.
  const int n = static_cast<int>(cost.rows());
  if (n == 0) return {};
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> result(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) result[p[j] - 1] = j - 1;
  return result;
}

}  // namespace maslov::linalg
