#include "fibercos/subspace_geometry.hpp"

#include <algorithm>
#include <string>

#include <Eigen/SVD>

#include "fibercos/error.hpp"

namespace fibercos {

namespace {

void require_same_ambient(const Subspace& E, const Subspace& F) {
  if (E.ambient_dim() != F.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "subspaces live in C^" + std::to_string(E.ambient_dim()) + " and C^" +
                    std::to_string(F.ambient_dim()));
  }
}

Subspace basis_from_svd(const CMatrix& columns, const RankTolerance& tol, double absolute_floor) {
  const auto m = static_cast<std::size_t>(columns.rows());
  if (columns.cols() == 0 || columns.rows() == 0) return Subspace(m, tol);

  Eigen::JacobiSVD<CMatrix> svd(columns, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double largest = sv.size() > 0 ? sv(0) : 0.0;
  if (!(largest > 0.0) || largest < absolute_floor) return Subspace(m, tol);

  const double cutoff = tol.relative_threshold * largest;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) >= cutoff) ++rank;
  return Subspace::from_orthonormal(svd.matrixU().leftCols(rank), tol);
}

}  // namespace

void RankTolerance::validate() const {
  auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!in_unit(relative_threshold) || !in_unit(intersect_threshold) || !in_unit(close_threshold)) {
    throw Error(ErrorKind::InvalidTolerance, "tolerances must lie strictly between 0 and 1");
  }
}

Subspace::Subspace(std::size_t ambient_dim, RankTolerance tol)
    : Subspace(ambient_dim, CMatrix(static_cast<Eigen::Index>(ambient_dim), 0), tol) {}

Subspace::Subspace(std::size_t ambient_dim, CMatrix basis, RankTolerance tol)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)), tol_(tol) {}

Subspace Subspace::from_orthonormal(CMatrix basis, RankTolerance tol) {
  const auto m = static_cast<std::size_t>(basis.rows());
  return Subspace(m, std::move(basis), tol);
}

Subspace orthonormal_basis(std::span<const CVector> vectors, std::size_t ambient_dim,
                           const RankTolerance& tol) {
  tol.validate();
  if (ambient_dim < 1) throw Error(ErrorKind::DimensionMismatch, "ambient dimension must be >= 1");
  const auto m = static_cast<Eigen::Index>(ambient_dim);
  CMatrix columns(m, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != m) {
      throw Error(ErrorKind::DimensionMismatch,
                  "vector " + std::to_string(j) + " has length " +
                      std::to_string(vectors[j].size()) + ", expected " + std::to_string(m));
    }
    columns.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  return basis_from_svd(columns, tol, 0.0);
}

Subspace orthonormal_basis(const CMatrix& columns, const RankTolerance& tol) {
  tol.validate();
  return basis_from_svd(columns, tol, 0.0);
}

Subspace orthonormal_basis(const CMatrix& columns, const RankTolerance& tol, double absolute_floor) {
  tol.validate();
  return basis_from_svd(columns, tol, absolute_floor);
}

Eigen::VectorXd principal_cosines(const Subspace& E, const Subspace& F) {
  require_same_ambient(E, F);
  if (E.is_zero() || F.is_zero()) return Eigen::VectorXd(0);
  const CMatrix cross = F.basis().adjoint() * E.basis();
  Eigen::JacobiSVD<CMatrix> svd(cross);
  return svd.singularValues().cwiseMin(1.0).cwiseMax(0.0);
}

double sup_cosine_angle(const Subspace& E, const Subspace& F) {
  const Eigen::VectorXd cosines = principal_cosines(E, F);
  return cosines.size() == 0 ? 0.0 : cosines(0);
}

CVector project(const Subspace& E, const CVector& v) {
  if (static_cast<std::size_t>(v.size()) != E.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "vector of length " + std::to_string(v.size()) + " projected onto a subspace of C^" +
                    std::to_string(E.ambient_dim()));
  }
  if (E.is_zero()) return CVector::Zero(v.size());
  return E.basis() * (E.basis().adjoint() * v);
}

std::size_t intersection_dimension(const Subspace& E, const Subspace& F, const RankTolerance& tol) {
  tol.validate();
  const Eigen::VectorXd cosines = principal_cosines(E, F);
  const double bar = 1.0 - tol.intersect_threshold;
  return static_cast<std::size_t>(std::count_if(cosines.begin(), cosines.end(),
                                                [bar](double c) { return c >= bar; }));
}

Subspace subspace_sum(const Subspace& E, const Subspace& F, const RankTolerance& tol) {
  require_same_ambient(E, F);
  CMatrix joined(static_cast<Eigen::Index>(E.ambient_dim()),
                 static_cast<Eigen::Index>(E.dim() + F.dim()));
  joined.leftCols(E.basis().cols()) = E.basis();
  joined.rightCols(F.basis().cols()) = F.basis();
  return orthonormal_basis(joined, tol);
}

}  // namespace fibercos
