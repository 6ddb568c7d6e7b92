#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace maslov {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Relative singular-value threshold used for ranks and kernels.
inline constexpr double kRankRelTol = 1e-9;

namespace linalg {

/// Number of singular values above rel * max(singular values).
int numerical_rank(const RVec& singular_values, double rel = kRankRelTol);

/// Orthonormal basis of the column span; throws RankDeficient when the columns are dependent.
Mat orthonormalize(const Mat& columns, double rel = kRankRelTol);

/// Orthonormal basis of the column span, dropping dependent directions instead of failing.
Mat range_basis(const Mat& columns, double rel = kRankRelTol);

/// Orthonormal basis of ker(A); may have zero columns.
Mat null_space(const Mat& a, double rel = kRankRelTol);

/// Orthogonal projector onto the span of orthonormal columns.
Mat projector(const Mat& orthonormal);

/// Sines of the principal angles between span(b1) and span(b2), ascending.
/// Both inputs must have orthonormal columns and equal column counts.
RVec principal_sines(const Mat& b1, const Mat& b2);

/// Gap metric ||P1 - P2|| for equal-dimensional subspaces with orthonormal bases.
double gap_metric(const Mat& b1, const Mat& b2);

bool same_span(const Mat& b1, const Mat& b2, double tol);

/// Eigenvalues of a (nearly) unitary matrix, projected onto the unit circle.
Vec unit_eigenvalues(const Mat& w);

/// Ascending eigenvalues of the Hermitian part of h.
RVec hermitian_eigenvalues(const Mat& h);

/// Lowest `count` eigenvalues of a Hermitian matrix (upper triangle referenced), ascending.
RVec lowest_hermitian_eigenvalues(const Mat& h, int count);

/// Number of eigenvalues of a Hermitian matrix (upper triangle referenced) below `level`, from the
/// inertia of a Bunch-Kaufman factorization of h - level I.
int count_hermitian_below(const Mat& h, double level);

Mat hermitian_part(const Mat& m);

/// Minimum-cost perfect matching of a square cost matrix: result[row] = column.
std::vector<int> optimal_assignment(const RMat& cost);

/// Angular distance between two points on the unit circle, in [0, pi].
double angular_distance(cplx a, cplx b);

/// Principal argument in (-pi, pi].
inline double angle(cplx z) { return std::arg(z); }

}  // namespace linalg
}  // namespace maslov
