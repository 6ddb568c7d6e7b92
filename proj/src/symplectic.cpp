#include "maslov/symplectic.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "maslov/errors.hpp"

namespace maslov {

namespace {

// Pivoted Gram-Schmidt over the columns of a projector: repeatedly take the column with the
// largest component orthogonal to the vectors already chosen (ties go to the lower index).
Mat canonical_basis(const Mat& proj, int n) {
  const Eigen::Index dim = proj.rows();
  Mat q(dim, n);
  std::vector<char> used(static_cast<std::size_t>(proj.cols()), 0);
  for (int k = 0; k < n; ++k) {
    Eigen::Index best = -1;
    double best_norm = 0.0;
    Vec best_resid;
    for (Eigen::Index j = 0; j < proj.cols(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      Vec r = proj.col(j);
      if (k > 0) r -= q.leftCols(k) * (q.leftCols(k).adjoint() * r);
      const double nr = r.norm();
      if (nr > best_norm * (1.0 + 1e-10)) {
        best = j;
        best_norm = nr;
        best_resid = r;
      }
    }
    if (best < 0 || best_norm < 1e-8) raise(ErrorCode::RankDeficient, "eigenspace projector has deficient rank");
    used[static_cast<std::size_t>(best)] = 1;
    if (k > 0) best_resid -= q.leftCols(k) * (q.leftCols(k).adjoint() * best_resid);
    q.col(k) = best_resid / best_resid.norm();
  }
  return q;
}

Mat standard_structure(int p) {
  Mat j = Mat::Zero(2 * p, 2 * p);
  j.block(0, p, p, p) = -Mat::Identity(p, p);
  j.block(p, 0, p, p) = Mat::Identity(p, p);
  return j;
}

}  // namespace

SymplecticSpace::SymplecticSpace(Mat j, Mat e_plus, Mat e_minus)
    : j_(std::move(j)), e_plus_(std::move(e_plus)), e_minus_(std::move(e_minus)) {}

std::shared_ptr<const SymplecticSpace> SymplecticSpace::create(const Mat& j) {
  const Eigen::Index d = j.rows();
  if (d == 0 || d != j.cols() || d % 2 != 0) raise(ErrorCode::ConfigError, "complex structure must be square of even size");
  const Mat id = Mat::Identity(d, d);
  const double sq = (j * j + id).norm();
  const double skew = (j.adjoint() + j).norm();
  if (sq > kStructureTol || skew > kStructureTol) {
    std::ostringstream os;
    os << "not a complex structure: |J^2+I| = " << sq << ", |J^*+J| = " << skew;
    raise(ErrorCode::ConfigError, os.str());
  }
  const int n = static_cast<int>(d / 2);
  Eigen::SelfAdjointEigenSolver<Mat> es(linalg::hermitian_part(-kI * j));
  if (es.info() != Eigen::Success) raise(ErrorCode::EigensolverFailure, "eigendecomposition of -iJ failed");
  const RVec& ev = es.eigenvalues();
  // ker(J + iI) is the -1 eigenspace of -iJ, ker(J - iI) the +1 eigenspace.
  for (int i = 0; i < n; ++i)
    if (std::abs(ev(i) + 1.0) > 1e-10 || std::abs(ev(n + i) - 1.0) > 1e-10)
      raise(ErrorCode::ConfigError, "eigenspaces of J are not half-dimensional");
  const Mat vm = es.eigenvectors().leftCols(n);
  const Mat vp = es.eigenvectors().rightCols(n);
  Mat e_plus = canonical_basis(vm * vm.adjoint(), n);
  Mat e_minus = canonical_basis(vp * vp.adjoint(), n);
  return std::shared_ptr<const SymplecticSpace>(new SymplecticSpace(j, std::move(e_plus), std::move(e_minus)));
}

cplx SymplecticSpace::omega(const Vec& u, const Vec& v) const { return v.dot(j_ * u); }

Mat SymplecticSpace::omega_matrix(const Mat& a, const Mat& b) const {
  return (b.adjoint() * j_ * a).transpose();
}

SpacePtr standard_space(int p) {
  if (p < 1) raise(ErrorCode::ConfigError, "standard_space requires p >= 1");
  return SymplecticSpace::create(standard_structure(p));
}

SpacePtr doubled_space(const SymplecticSpace& base) {
  const int d = base.dim();
  Mat j = Mat::Zero(2 * d, 2 * d);
  j.topLeftCorner(d, d) = base.J();
  j.bottomRightCorner(d, d) = -base.J();
  return SymplecticSpace::create(j);
}

LagrangianPlane::LagrangianPlane(SpacePtr space, Mat basis, Mat unitary)
    : space_(std::move(space)), basis_(std::move(basis)), unitary_(std::move(unitary)) {}

double LagrangianPlane::isotropy_residual() const {
  return (basis_.adjoint() * space_->J() * basis_).cwiseAbs().maxCoeff();
}

LagrangianPlane plane_from_basis(const SpacePtr& space, const Mat& columns, double isotropy_tol) {
  if (columns.rows() != space->dim()) raise(ErrorCode::ConfigError, "basis rows do not match the space dimension");
  if (columns.cols() != space->half_dim())
    raise(ErrorCode::NotHalfDimensional,
          std::to_string(columns.cols()) + " columns in a space of dimension " + std::to_string(space->dim()));
  Mat b = linalg::orthonormalize(columns);
  const double iso = (b.adjoint() * space->J() * b).cwiseAbs().maxCoeff();
  if (iso > isotropy_tol) {
    std::ostringstream os;
    os << "isotropy residual " << iso << " exceeds " << isotropy_tol;
    raise(ErrorCode::NotIsotropic, os.str());
  }
  const Mat p = space->plus_basis().adjoint() * b;
  const Mat q = space->minus_basis().adjoint() * b;
  // U = Q P^{-1}, i.e. solve P^T U^T = Q^T.
  Mat u = p.transpose().partialPivLu().solve(q.transpose()).transpose();
  const Eigen::Index n = u.rows();
  const double defect = (u.adjoint() * u - Mat::Identity(n, n)).norm();
  if (!std::isfinite(defect) || defect > 1e-6) raise(ErrorCode::Singular, "graph unitary solve failed");
  return LagrangianPlane(space, std::move(b), std::move(u));
}

LagrangianPlane plane_from_unitary(const SpacePtr& space, const Mat& u) {
  const int n = space->half_dim();
  if (u.rows() != n || u.cols() != n) raise(ErrorCode::ConfigError, "unitary has the wrong size");
  const double defect = (u.adjoint() * u - Mat::Identity(n, n)).norm();
  if (defect > 1e-8) raise(ErrorCode::Singular, "matrix is not unitary");
  Mat b = (space->plus_basis() + space->minus_basis() * u) / std::sqrt(2.0);
  return LagrangianPlane(space, std::move(b), u);
}

Mat relative_unitary(const LagrangianPlane& f, const LagrangianPlane& z) {
  return f.unitary() * z.unitary().adjoint();
}

int intersection_dim(const LagrangianPlane& f, const LagrangianPlane& z, double tol) {
  const Vec mu = linalg::unit_eigenvalues(relative_unitary(f, z));
  int count = 0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double a = std::abs(std::arg(mu(i)));
    if (a < tol) {
      ++count;
    } else if (a <= 2.0 * tol) {
      std::ostringstream os;
      os << "eigenvalue at angular distance " << a << " from 1 with tol " << tol;
      raise(ErrorCode::ToleranceAmbiguous, os.str());
    }
  }
  return count;
}

int intersection_dim_svd(const LagrangianPlane& f, const LagrangianPlane& z, double tol) {
  const RVec s = linalg::principal_sines(f.basis(), z.basis());
  const double cut = std::sin(0.5 * tol);
  int count = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) < cut) ++count;
  return count;
}

Mat intersection_basis(const LagrangianPlane& f, const LagrangianPlane& z, int k) {
  if (k <= 0) return Mat(f.basis().rows(), 0);
  const Mat& b = f.basis();
  Mat resid = b - z.basis() * (z.basis().adjoint() * b);
  Eigen::JacobiSVD<Mat> svd(resid, Eigen::ComputeFullV);
  // Singular values come out descending, so the last k right vectors are the closest directions.
  Mat c = svd.matrixV().rightCols(k);
  return b * c;
}

Mat annihilator(const SymplecticSpace& space, const Mat& columns) {
  if (columns.cols() == 0) return Mat::Identity(space.dim(), space.dim());
  // omega(u, v) = v^* J u, so the annihilator is ker(V^* J).
  return linalg::null_space(columns.adjoint() * space.J());
}

Mat ja_graph_decompose(const LagrangianPlane& v, const LagrangianPlane& f) {
  const Mat& b = f.basis();
  const Mat& c = v.basis();
  const Mat bc = b.adjoint() * c;
  Eigen::JacobiSVD<Mat> svd(bc);
  const RVec& sv = svd.singularValues();
  if (sv(sv.size() - 1) < 1e-8) raise(ErrorCode::NotTransversal, "plane meets JF nontrivially");
  const Mat jb = v.space()->J() * b;
  Mat a = (jb.adjoint() * c) * bc.inverse();
  return a;
}

Mat restricted_unitary(const LagrangianPlane& v, const LagrangianPlane& f) {
  const SymplecticSpace& sp = *v.space();
  const Eigen::Index d = sp.dim();
  const Mat id = Mat::Identity(d, d);
  const Mat& b = f.basis();
  const Mat u_op = sp.minus_basis() * v.unitary() * sp.plus_basis().adjoint();
  const Mat rhs = u_op * (id + kI * sp.J()) * b;
  const Mat lhs = (id - kI * sp.J()) * b;
  return lhs.colPivHouseholderQr().solve(rhs);
}

Mat cayley_transform(const Mat& a) {
  const Eigen::Index n = a.rows();
  const Mat id = Mat::Identity(n, n);
  const Mat num = id + kI * a;
  const Mat den = id - kI * a;
  return den.transpose().partialPivLu().solve(num.transpose()).transpose();
}

}  // namespace maslov
