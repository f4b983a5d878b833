#pragma once

#include <cstddef>
#include <span>

#include "fibercos/types.hpp"

namespace fibercos {

/// Numerical cutoffs that turn exact rank/intersection/closedness statements
/// into floating-point decisions.
struct RankTolerance {
  /// Singular values below relative_threshold * largest are treated as zero.
  double relative_threshold = 1e-10;
  /// Principal cosines >= 1 - intersect_threshold count as shared directions.
  double intersect_threshold = 1e-8;
  /// Angles > 1 - close_threshold make a sum "not closed".
  double close_threshold = 1e-6;

  /// Throws Error(InvalidTolerance) unless every field lies in (0, 1).
  void validate() const;
};

/// Finite-dimensional subspace of C^m stored as an orthonormal basis.
///
/// A basis with zero columns is the zero subspace; it is an ordinary value.
class Subspace {
 public:
  /// Zero subspace of C^ambient_dim.
  explicit Subspace(std::size_t ambient_dim, RankTolerance tol = {});

  /// Wraps columns that are already orthonormal. The caller guarantees it.
  static Subspace from_orthonormal(CMatrix basis, RankTolerance tol = {});

  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(basis_.cols()); }
  bool is_zero() const noexcept { return basis_.cols() == 0; }
  const CMatrix& basis() const noexcept { return basis_; }
  const RankTolerance& tol() const noexcept { return tol_; }

 private:
  Subspace(std::size_t ambient_dim, CMatrix basis, RankTolerance tol);

  std::size_t ambient_dim_;
  CMatrix basis_;
  RankTolerance tol_;
};

/// Orthonormal basis of span(vectors) in C^ambient_dim. Rank is decided by
/// the relative singular-value cutoff; empty or all-zero input gives the
/// zero subspace.
Subspace orthonormal_basis(std::span<const CVector> vectors, std::size_t ambient_dim,
                           const RankTolerance& tol = {});

/// Same, with the spanning vectors given as the columns of an m x k matrix.
Subspace orthonormal_basis(const CMatrix& columns, const RankTolerance& tol = {});

/// Orthonormal basis of the column span, treating the whole family as zero
/// when its largest singular value falls below `absolute_floor`.
Subspace orthonormal_basis(const CMatrix& columns, const RankTolerance& tol, double absolute_floor);

/// Cosines of the principal angles between E and F, descending.
Eigen::VectorXd principal_cosines(const Subspace& E, const Subspace& F);

/// sup over unit u in E of ||P_F u||; 0 if either space is zero, clamped to [0,1].
double sup_cosine_angle(const Subspace& E, const Subspace& F);

/// Orthogonal projection Q_E Q_E^H v.
CVector project(const Subspace& E, const CVector& v);

/// Number of principal cosines >= 1 - tol.intersect_threshold.
std::size_t intersection_dimension(const Subspace& E, const Subspace& F, const RankTolerance& tol = {});

/// Orthonormal basis of E + F.
Subspace subspace_sum(const Subspace& E, const Subspace& F, const RankTolerance& tol = {});

}  // namespace fibercos
