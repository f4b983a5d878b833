#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fibercos/gramian_engine.hpp"
#include "fibercos/subspace_geometry.hpp"
#include "fibercos/types.hpp"

namespace fibercos {

/// Sample points x_j of the fiber space X with positive quadrature weights.
class FiberGrid {
 public:
  FiberGrid(std::vector<double> coords, std::vector<double> weights);

  /// n midpoints (j + 0.5) / n of [0, 1), weight 1/n each.
  static FiberGrid midpoints(std::size_t n);
  /// n left endpoints j / n of [0, 1), weight 1/n each.
  static FiberGrid left_endpoints(std::size_t n);

  std::size_t size() const noexcept { return coords_.size(); }
  const std::vector<double>& coords() const noexcept { return coords_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  bool operator==(const FiberGrid&) const = default;

 private:
  std::vector<double> coords_;
  std::vector<double> weights_;
};

/// r generators sampled on a grid: one GeneratorFiber per grid point, all
/// with the same r and fiber dimension m.
class FiberedGeneratorSet {
 public:
  FiberedGeneratorSet(FiberGrid grid, std::vector<GeneratorFiber> fibers);

  const FiberGrid& grid() const noexcept { return grid_; }
  const std::vector<GeneratorFiber>& fibers() const noexcept { return fibers_; }
  const GeneratorFiber& fiber(std::size_t j) const { return fibers_.at(j); }
  std::size_t size() const noexcept { return fibers_.size(); }
  std::size_t generator_count() const noexcept { return fibers_.front().count(); }
  std::size_t fiber_dim() const noexcept { return fibers_.front().ambient_dim(); }

  /// sum_j w_j sum_i ||psi_i(x_j)||^2
  double squared_norm() const;

 private:
  FiberGrid grid_;
  std::vector<GeneratorFiber> fibers_;
};

/// Throws Error(GridMismatch) unless both sets share grid and fiber dimension.
void require_compatible(const FiberedGeneratorSet& a, const FiberedGeneratorSet& b);

/// J(x_j) = span{psi_i(x_j)} per fiber.
///
/// A fiber whose largest singular value is below
/// tol.relative_threshold * (largest fiber Frobenius norm over the grid)
/// is reported as the zero subspace, so rounding debris does not enter the
/// spectrum.
std::vector<Subspace> range_function(const FiberedGeneratorSet& set, const RankTolerance& tol = {});

/// Indices j with dim J(x_j) >= 1.
FiberIndexSet spectrum(const std::vector<Subspace>& rf);

/// sigma(A) intersected with sigma(B).
FiberIndexSet omega(const std::vector<Subspace>& rf_a, const std::vector<Subspace>& rf_b);

/// Fibers of omega where J_A(x) and J_B(x) intersect trivially.
FiberIndexSet omega_prime(const FiberedGeneratorSet& set_a, const FiberedGeneratorSet& set_b,
                          const RankTolerance& tol = {});

struct FiberAngle {
  std::size_t index = 0;
  double x = 0.0;
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  /// Supremum cosine angle of the range-function subspaces.
  double angle = 0.0;
  /// Same quantity from the pseudo-inverse Gramian formula.
  double gramian_angle = 0.0;
  bool in_omega = false;
  bool in_omega_prime = false;
  bool in_region = true;
};

struct AngleProfile {
  std::vector<FiberAngle> fibers;
  /// max of angle over region and omega; 0 when empty.
  double ess_sup_omega = 0.0;
  /// max of angle over region and omega'; 0 when empty.
  double ess_sup_omega_prime = 0.0;
  std::optional<std::size_t> argmax_omega;
  std::optional<std::size_t> argmax_omega_prime;
  /// max over all fibers of |angle - gramian_angle|.
  double max_route_deviation = 0.0;
};

/// Route disagreement above this raises Error(NumericalInconsistency).
inline constexpr double kRouteFailureThreshold = 1e-6;

/// Per-fiber angles by both routes plus the max over `region`.
AngleProfile ess_sup_angle(const FiberedGeneratorSet& set_a, const FiberedGeneratorSet& set_b,
                           const FiberIndexSet& region, const RankTolerance& tol = {});

/// ess_sup_angle over every fiber of the grid.
AngleProfile ess_sup_angle(const FiberedGeneratorSet& set_a, const FiberedGeneratorSet& set_b,
                           const RankTolerance& tol = {});

struct ClosednessReport {
  bool closed = true;
  double ess_sup_omega_prime = 0.0;
  FiberIndexSet witnesses;
  AngleProfile profile;
};

/// Sum restricted to omega' is closed iff the max angle over omega' stays
/// at or below 1 - tol.close_threshold.
ClosednessReport closedness_diagnosis(const FiberedGeneratorSet& set_a,
                                      const FiberedGeneratorSet& set_b,
                                      const RankTolerance& tol = {});

/// Zeroes every fiber outside `region`.
FiberedGeneratorSet restrict(const FiberedGeneratorSet& set, const FiberIndexSet& region);

/// All indices 0..n-1.
FiberIndexSet all_fibers(std::size_t n);

}  // namespace fibercos
