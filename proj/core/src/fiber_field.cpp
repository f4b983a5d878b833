#include "fibercos/fiber_field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/SVD>

#include "fibercos/error.hpp"

namespace fibercos {

namespace {

std::vector<bool> region_mask(const FiberIndexSet& region, std::size_t n) {
  std::vector<bool> mask(n, false);
  for (std::size_t j : region) {
    if (j >= n) {
      throw Error(ErrorKind::InvalidRegion,
                  "fiber index " + std::to_string(j) + " outside grid of size " + std::to_string(n));
    }
    mask[j] = true;
  }
  return mask;
}

}  // namespace

FiberGrid::FiberGrid(std::vector<double> coords, std::vector<double> weights)
    : coords_(std::move(coords)), weights_(std::move(weights)) {
  if (coords_.empty()) throw Error(ErrorKind::InvalidGrid, "grid needs at least one point");
  if (coords_.size() != weights_.size()) {
    throw Error(ErrorKind::InvalidGrid, "grid has " + std::to_string(coords_.size()) +
                                            " points but " + std::to_string(weights_.size()) +
                                            " weights");
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorKind::InvalidGrid, "grid weights must be positive and finite");
    }
  }
  std::vector<double> sorted = coords_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::InvalidGrid, "grid labels must be unique");
  }
}

FiberGrid FiberGrid::midpoints(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidGrid, "grid needs at least one point");
  std::vector<double> coords(n);
  for (std::size_t j = 0; j < n; ++j) {
    coords[j] = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
  }
  return FiberGrid(std::move(coords), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

FiberGrid FiberGrid::left_endpoints(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidGrid, "grid needs at least one point");
  std::vector<double> coords(n);
  for (std::size_t j = 0; j < n; ++j) coords[j] = static_cast<double>(j) / static_cast<double>(n);
  return FiberGrid(std::move(coords), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

FiberedGeneratorSet::FiberedGeneratorSet(FiberGrid grid, std::vector<GeneratorFiber> fibers)
    : grid_(std::move(grid)), fibers_(std::move(fibers)) {
  if (fibers_.size() != grid_.size()) {
    throw Error(ErrorKind::GridMismatch, std::to_string(fibers_.size()) + " fibers for a grid of " +
                                             std::to_string(grid_.size()) + " points");
  }
  const std::size_t r = fibers_.front().count();
  const std::size_t m = fibers_.front().ambient_dim();
  for (const auto& fib : fibers_) {
    if (fib.count() != r || fib.ambient_dim() != m) {
      throw Error(ErrorKind::DimensionMismatch, "fibers disagree on generator count or dimension");
    }
    if (!fib.vectors().allFinite()) {
      throw Error(ErrorKind::DimensionMismatch, "fiber values must be finite");
    }
  }
}

double FiberedGeneratorSet::squared_norm() const {
  double total = 0.0;
  for (std::size_t j = 0; j < fibers_.size(); ++j) {
    total += grid_.weights()[j] * fibers_[j].vectors().squaredNorm();
  }
  return total;
}

void require_compatible(const FiberedGeneratorSet& a, const FiberedGeneratorSet& b) {
  if (!(a.grid() == b.grid())) throw Error(ErrorKind::GridMismatch, "generator sets use different grids");
  if (a.fiber_dim() != b.fiber_dim()) {
    throw Error(ErrorKind::GridMismatch, "generator sets have fiber dimensions " +
                                             std::to_string(a.fiber_dim()) + " and " +
                                             std::to_string(b.fiber_dim()));
  }
}

FiberIndexSet all_fibers(std::size_t n) {
  FiberIndexSet out(n);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

std::vector<Subspace> range_function(const FiberedGeneratorSet& set, const RankTolerance& tol) {
  tol.validate();
  double scale = 0.0;
  for (const auto& fib : set.fibers()) scale = std::max(scale, fib.vectors().norm());
  const double floor = tol.relative_threshold * scale;

  std::vector<Subspace> rf;
  rf.reserve(set.size());
  for (const auto& fib : set.fibers()) rf.push_back(orthonormal_basis(fib.vectors(), tol, floor));
  return rf;
}

FiberIndexSet spectrum(const std::vector<Subspace>& rf) {
  FiberIndexSet out;
  for (std::size_t j = 0; j < rf.size(); ++j) {
    if (!rf[j].is_zero()) out.push_back(j);
  }
  return out;
}

FiberIndexSet omega(const std::vector<Subspace>& rf_a, const std::vector<Subspace>& rf_b) {
  if (rf_a.size() != rf_b.size()) {
    throw Error(ErrorKind::GridMismatch, "range functions over grids of size " +
                                             std::to_string(rf_a.size()) + " and " +
                                             std::to_string(rf_b.size()));
  }
  FiberIndexSet out;
  for (std::size_t j = 0; j < rf_a.size(); ++j) {
    if (!rf_a[j].is_zero() && !rf_b[j].is_zero()) out.push_back(j);
  }
  return out;
}

FiberIndexSet omega_prime(const FiberedGeneratorSet& set_a, const FiberedGeneratorSet& set_b,
                          const RankTolerance& tol) {
  require_compatible(set_a, set_b);
  const auto rf_a = range_function(set_a, tol);
  const auto rf_b = range_function(set_b, tol);
  FiberIndexSet out;
  for (std::size_t j : omega(rf_a, rf_b)) {
    if (intersection_dimension(rf_a[j], rf_b[j], tol) == 0) out.push_back(j);
  }
  return out;
}

AngleProfile ess_sup_angle(const FiberedGeneratorSet& set_a, const FiberedGeneratorSet& set_b,
                           const FiberIndexSet& region, const RankTolerance& tol) {
  require_compatible(set_a, set_b);
  const std::size_t n = set_a.size();
  const auto in_region = region_mask(region, n);
  const auto rf_a = range_function(set_a, tol);
  const auto rf_b = range_function(set_b, tol);

  AngleProfile profile;
  profile.fibers.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    FiberAngle fa;
    fa.index = j;
    fa.x = set_a.grid().coords()[j];
    fa.dim_a = rf_a[j].dim();
    fa.dim_b = rf_b[j].dim();
    fa.in_region = in_region[j];
    fa.in_omega = fa.dim_a > 0 && fa.dim_b > 0;
    if (fa.in_omega) {
      fa.angle = sup_cosine_angle(rf_a[j], rf_b[j]);
      const auto& fib_a = set_a.fiber(j);
      const auto& fib_b = set_b.fiber(j);
      fa.gramian_angle =
          fiber_angle_via_gramian(gramian(fib_a), gramian(fib_b), mixed_gramian(fib_a, fib_b), tol);
      fa.in_omega_prime = intersection_dimension(rf_a[j], rf_b[j], tol) == 0;
    }
    const double dev = std::abs(fa.angle - fa.gramian_angle);
    if (dev > kRouteFailureThreshold) {
      throw Error(ErrorKind::NumericalInconsistency,
                  "basis and Gramian angles disagree by " + std::to_string(dev) + " at fiber " +
                      std::to_string(j));
    }
    profile.max_route_deviation = std::max(profile.max_route_deviation, dev);

    if (fa.in_region && fa.in_omega &&
        (!profile.argmax_omega || fa.angle > profile.ess_sup_omega)) {
      profile.ess_sup_omega = fa.angle;
      profile.argmax_omega = j;
    }
    if (fa.in_region && fa.in_omega_prime &&
        (!profile.argmax_omega_prime || fa.angle > profile.ess_sup_omega_prime)) {
      profile.ess_sup_omega_prime = fa.angle;
      profile.argmax_omega_prime = j;
    }
    profile.fibers.push_back(fa);
  }
  return profile;
}

AngleProfile ess_sup_angle(const FiberedGeneratorSet& set_a, const FiberedGeneratorSet& set_b,
                           const RankTolerance& tol) {
  return ess_sup_angle(set_a, set_b, all_fibers(set_a.size()), tol);
}

ClosednessReport closedness_diagnosis(const FiberedGeneratorSet& set_a,
                                      const FiberedGeneratorSet& set_b,
                                      const RankTolerance& tol) {
  ClosednessReport report;
  report.profile = ess_sup_angle(set_a, set_b, tol);
  report.ess_sup_omega_prime = report.profile.ess_sup_omega_prime;
  const double bar = 1.0 - tol.close_threshold;
  for (const auto& fa : report.profile.fibers) {
    if (fa.in_omega_prime && fa.angle > bar) report.witnesses.push_back(fa.index);
  }
  report.closed = report.ess_sup_omega_prime <= bar;
  return report;
}

FiberedGeneratorSet restrict(const FiberedGeneratorSet& set, const FiberIndexSet& region) {
  const auto keep = region_mask(region, set.size());
  std::vector<GeneratorFiber> fibers;
  fibers.reserve(set.size());
  for (std::size_t j = 0; j < set.size(); ++j) {
    const auto& fib = set.fiber(j);
    if (keep[j]) {
      fibers.push_back(fib);
    } else {
      fibers.emplace_back(CMatrix::Zero(fib.vectors().rows(), fib.vectors().cols()));
    }
  }
  return FiberedGeneratorSet(set.grid(), std::move(fibers));
}

}  // namespace fibercos
