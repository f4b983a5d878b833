#include "fibercos/gramian_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "fibercos/error.hpp"

namespace fibercos {

namespace {

void require_length(Eigen::Index got, std::size_t want, const char* what) {
  if (static_cast<std::size_t>(got) != want) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " has length " +
                                                  std::to_string(got) + ", expected " +
                                                  std::to_string(want));
  }
}

// Hermitian part plus its eigendecomposition; rejects matrices that are
// not Hermitian PSD to working precision.
Eigen::SelfAdjointEigenSolver<CMatrix> hermitian_eigen(const GramianMatrix& G) {
  if (G.role != GramianRole::Plain) {
    throw Error(ErrorKind::InvalidGramian, "expected a plain Gramian, got a mixed one");
  }
  if (G.entries.rows() != G.entries.cols()) {
    throw Error(ErrorKind::InvalidGramian, "Gramian is not square");
  }
  const double scale = G.entries.size() == 0 ? 0.0 : G.entries.cwiseAbs().maxCoeff();
  const double asym =
      G.entries.size() == 0 ? 0.0 : (G.entries - G.entries.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, scale)) {
    throw Error(ErrorKind::InvalidGramian, "Gramian is not Hermitian (asymmetry " +
                                               std::to_string(asym) + ")");
  }
  const CMatrix herm = 0.5 * (G.entries + G.entries.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::InvalidGramian, "eigendecomposition failed");
  }
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  if (lambda.size() > 0) {
    const double lmax = lambda.maxCoeff();
    if (lambda.minCoeff() < -1e-10 * std::max(lmax, 0.0) - 1e-300) {
      throw Error(ErrorKind::InvalidGramian, "Gramian is not positive semidefinite");
    }
  }
  return eig;
}

}  // namespace

GeneratorFiber::GeneratorFiber(CMatrix vectors) : vectors_(std::move(vectors)) {
  if (vectors_.cols() < 1 || vectors_.rows() < 1) {
    throw Error(ErrorKind::DimensionMismatch, "a generator fiber needs r >= 1 vectors of length m >= 1");
  }
}

GeneratorFiber::GeneratorFiber(std::span<const CVector> vectors) {
  if (vectors.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "a generator fiber needs r >= 1 vectors");
  }
  const Eigen::Index m = vectors.front().size();
  vectors_.resize(m, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    require_length(vectors[i].size(), static_cast<std::size_t>(m), "generator fiber vector");
    vectors_.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  if (m < 1) throw Error(ErrorKind::DimensionMismatch, "fiber vectors must have length >= 1");
}

CVector analysis_apply(const GeneratorFiber& fib, const CVector& h) {
  require_length(h.size(), fib.ambient_dim(), "analysis input");
  return fib.vectors().adjoint() * h;
}

CVector synthesis_apply(const GeneratorFiber& fib, const CVector& c) {
  require_length(c.size(), fib.count(), "synthesis coefficients");
  return fib.vectors() * c;
}

GramianMatrix gramian(const GeneratorFiber& fib) {
  return {fib.vectors().adjoint() * fib.vectors(), GramianRole::Plain};
}

GramianMatrix mixed_gramian(const GeneratorFiber& fib_a, const GeneratorFiber& fib_b) {
  if (fib_a.ambient_dim() != fib_b.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "mixed Gramian of fibers in C^" + std::to_string(fib_a.ambient_dim()) + " and C^" +
                    std::to_string(fib_b.ambient_dim()));
  }
  return {fib_b.vectors().adjoint() * fib_a.vectors(), GramianRole::Mixed};
}

CMatrix pinv_sqrt(const GramianMatrix& G, const RankTolerance& tol) {
  tol.validate();
  const auto eig = hermitian_eigen(G);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const Eigen::Index r = lambda.size();
  if (r == 0) return CMatrix(0, 0);
  const double lmax = lambda.maxCoeff();
  Eigen::VectorXd inv_root = Eigen::VectorXd::Zero(r);
  if (lmax > 0.0) {
    const double cutoff = tol.relative_threshold * lmax;
    for (Eigen::Index k = 0; k < r; ++k) {
      if (lambda(k) >= cutoff) inv_root(k) = 1.0 / std::sqrt(lambda(k));
    }
  }
  const CMatrix& U = eig.eigenvectors();
  return U * inv_root.cast<Complex>().asDiagonal() * U.adjoint();
}

double fiber_angle_via_gramian(const GramianMatrix& G_A, const GramianMatrix& G_B,
                               const GramianMatrix& G_mix, const RankTolerance& tol) {
  if (G_mix.rows() != G_B.rows() || G_mix.cols() != G_A.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "mixed Gramian is " + std::to_string(G_mix.rows()) + "x" +
                    std::to_string(G_mix.cols()) + ", expected " + std::to_string(G_B.rows()) +
                    "x" + std::to_string(G_A.rows()));
  }
  const CMatrix product = pinv_sqrt(G_B, tol) * G_mix.entries * pinv_sqrt(G_A, tol);
  if (product.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(product);
  return std::clamp(svd.singularValues()(0), 0.0, 1.0);
}

std::optional<FrameBounds> fiber_frame_bounds(const GramianMatrix& G, const RankTolerance& tol) {
  tol.validate();
  const auto eig = hermitian_eigen(G);
  const Eigen::VectorXd& lambda = eig.eigenvalues();  // ascending
  if (lambda.size() == 0) return std::nullopt;
  const double lmax = lambda(lambda.size() - 1);
  if (!(lmax > 0.0)) return std::nullopt;
  const double cutoff = tol.relative_threshold * lmax;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (lambda(k) >= cutoff) return FrameBounds{lambda(k), lmax};
  }
  return std::nullopt;
}

std::size_t numerical_rank(const CMatrix& A, const RankTolerance& tol) {
  tol.validate();
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(A);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (!(sv(0) > 0.0)) return 0;
  const double cutoff = tol.relative_threshold * sv(0);
  return static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(),
                                                [cutoff](double s) { return s >= cutoff; }));
}

}  // namespace fibercos
