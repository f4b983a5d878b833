#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "fibercos/subspace_geometry.hpp"
#include "fibercos/types.hpp"

namespace fibercos {

/// Values psi_1(x), ..., psi_r(x) of r generators at one fiber, stored as
/// the columns of an m x r matrix.
///
/// Inner products are linear in the first argument and conjugate-linear in
/// the second: <u, v> = v^H u.
class GeneratorFiber {
 public:
  explicit GeneratorFiber(CMatrix vectors);
  explicit GeneratorFiber(std::span<const CVector> vectors);

  std::size_t count() const noexcept { return static_cast<std::size_t>(vectors_.cols()); }
  std::size_t ambient_dim() const noexcept { return static_cast<std::size_t>(vectors_.rows()); }
  const CMatrix& vectors() const noexcept { return vectors_; }
  CVector vector(std::size_t i) const { return vectors_.col(static_cast<Eigen::Index>(i)); }

 private:
  CMatrix vectors_;
};

enum class GramianRole { Plain, Mixed };

struct GramianMatrix {
  CMatrix entries;
  GramianRole role = GramianRole::Plain;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(entries.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(entries.cols()); }
};

/// (T h)_i = <h, psi_i>.
CVector analysis_apply(const GeneratorFiber& fib, const CVector& h);

/// T^* c = sum_i c_i psi_i.
CVector synthesis_apply(const GeneratorFiber& fib, const CVector& c);

/// G(i, j) = <psi_j, psi_i>, i.e. Psi^H Psi.
GramianMatrix gramian(const GeneratorFiber& fib);

/// G_mix(i, j) = <psi_j, phi_i> with psi from fib_a and phi from fib_b,
/// i.e. Phi^H Psi (size r_b x r_a).
GramianMatrix mixed_gramian(const GeneratorFiber& fib_a, const GeneratorFiber& fib_b);

/// Hermitian square root of the pseudo-inverse. Eigenvalues below
/// tol.relative_threshold * lambda_max are treated as zero.
CMatrix pinv_sqrt(const GramianMatrix& G, const RankTolerance& tol = {});

/// || (G_B^+)^{1/2} G_mix (G_A^+)^{1/2} ||, clamped to [0, 1]. Equals the
/// supremum cosine angle between the spans of the two fibers.
double fiber_angle_via_gramian(const GramianMatrix& G_A, const GramianMatrix& G_B,
                               const GramianMatrix& G_mix, const RankTolerance& tol = {});

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Extreme nonzero eigenvalues of a plain Gramian: the frame bounds of the
/// fiber family for its own span. Empty when the Gramian is zero.
std::optional<FrameBounds> fiber_frame_bounds(const GramianMatrix& G, const RankTolerance& tol = {});

/// Numerical rank under the relative singular-value cutoff.
std::size_t numerical_rank(const CMatrix& A, const RankTolerance& tol = {});

}  // namespace fibercos
