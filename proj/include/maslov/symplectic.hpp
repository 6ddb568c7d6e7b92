#pragma once

#include <memory>

#include "maslov/linalg.hpp"

namespace maslov {

inline constexpr double kStructureTol = 1e-12;
inline constexpr double kIsotropyTol = 1e-10;
inline constexpr double kIntersectionTol = 1e-8;

/// Finite-dimensional complex space with complex structure J and form omega(u,v) = <Ju, v>.
///
/// The inner product is linear in the first slot, so omega(u, v) = v^* J u.
/// Orthonormal bases of ker(J + iI) and ker(J - iI) are fixed at construction;
/// every graph unitary is expressed in these coordinates.
class SymplecticSpace {
 public:
  /// Validates J^2 = -I and J^* = -J and fixes the eigenspace bases.
  static std::shared_ptr<const SymplecticSpace> create(const Mat& j);

  int dim() const { return static_cast<int>(j_.rows()); }
  int half_dim() const { return dim() / 2; }
  const Mat& J() const { return j_; }

  /// Orthonormal basis of ker(J + iI), the domain of graph unitaries.
  const Mat& plus_basis() const { return e_plus_; }
  /// Orthonormal basis of ker(J - iI), the codomain of graph unitaries.
  const Mat& minus_basis() const { return e_minus_; }

  cplx omega(const Vec& u, const Vec& v) const;
  /// Matrix of omega(a_i, b_j) over the columns of a and b.
  Mat omega_matrix(const Mat& a, const Mat& b) const;

 private:
  SymplecticSpace(Mat j, Mat e_plus, Mat e_minus);
  Mat j_;
  Mat e_plus_;
  Mat e_minus_;
};

using SpacePtr = std::shared_ptr<const SymplecticSpace>;

/// C^p x C^p with J(f, g) = (-g, f).
SpacePtr standard_space(int p);

/// X (+) X with structure J (+) (-J), the home of two-path problems.
SpacePtr doubled_space(const SymplecticSpace& base);

/// Immutable Lagrangian plane stored as an orthonormal basis together with its graph unitary.
class LagrangianPlane {
 public:
  const SpacePtr& space() const { return space_; }
  const Mat& basis() const { return basis_; }
  /// Graph unitary U with plane = {y + Uy : y in ker(J + iI)}.
  const Mat& unitary() const { return unitary_; }
  int half_dim() const { return static_cast<int>(basis_.cols()); }
  /// max |omega(b_i, b_j)| over basis columns.
  double isotropy_residual() const;

 private:
  LagrangianPlane(SpacePtr space, Mat basis, Mat unitary);
  SpacePtr space_;
  Mat basis_;
  Mat unitary_;

  friend LagrangianPlane plane_from_basis(const SpacePtr&, const Mat&, double);
  friend LagrangianPlane plane_from_unitary(const SpacePtr&, const Mat&);
};

/// Orthonormalizes the columns and validates half dimension and isotropy.
LagrangianPlane plane_from_basis(const SpacePtr& space, const Mat& columns, double isotropy_tol = kIsotropyTol);

/// The graph {y + Uy} of a unitary given in the space's fixed coordinates.
LagrangianPlane plane_from_unitary(const SpacePtr& space, const Mat& u);

inline const Mat& graph_unitary(const LagrangianPlane& plane) { return plane.unitary(); }

/// U_F V_Z^{-1}; its eigenvalues at 1 count the intersection of F and Z.
Mat relative_unitary(const LagrangianPlane& f, const LagrangianPlane& z);

/// dim(F cap Z) as the number of eigenvalues of U_F V_Z^{-1} with angular distance to 1 below tol.
/// Throws ToleranceAmbiguous when an eigenvalue sits in [tol, 2 tol].
int intersection_dim(const LagrangianPlane& f, const LagrangianPlane& z, double tol = kIntersectionTol);

/// Same count from principal angles between the two bases (angle below tol / 2).
int intersection_dim_svd(const LagrangianPlane& f, const LagrangianPlane& z, double tol = kIntersectionTol);

/// Orthonormal basis of the k-dimensional (approximate) intersection, taken as the k directions of F
/// closest to Z.
Mat intersection_basis(const LagrangianPlane& f, const LagrangianPlane& z, int k);

/// {u : omega(u, v) = 0 for all v in span(columns)}, as an orthonormal basis.
Mat annihilator(const SymplecticSpace& space, const Mat& columns);

/// Hermitian A on F (in the basis of F) with V = {x + JAx : x in F}. Throws NotTransversal.
Mat ja_graph_decompose(const LagrangianPlane& v, const LagrangianPlane& f);

/// (I - iJ)^{-1} U_V (I + iJ) restricted to F, in the basis of F.
Mat restricted_unitary(const LagrangianPlane& v, const LagrangianPlane& f);

/// (I + iA)(I - iA)^{-1}.
Mat cayley_transform(const Mat& a);

}  // namespace maslov
