#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fibercos/fiber_field.hpp"
#include "fibercos/transforms.hpp"
#include "fibercos/types.hpp"

namespace fibercos {

/// Dense sampling operator on Z_N: row t*r + i is conj(L_{tM} psi_i)^T, so
/// (T f)_{t*r+i} = <f, L_{tM} psi_i>.
CMatrix sampling_matrix_finite(const FiniteGroupPair& pair, std::span<const CVector> measuring_generators);

struct InjectivityFiber {
  std::size_t index = 0;
  double x = 0.0;
  std::size_t dim_target = 0;
  /// rank of the mixed Gramian of target against measuring fibers
  std::size_t mixed_rank = 0;
  /// largest Gramian eigenvalue of the measuring fiber (0 if it vanishes)
  double measuring_upper_bound = 0.0;
  bool ok = true;
};

struct InjectivityReport {
  bool injective = true;
  std::vector<InjectivityFiber> fibers;
  /// subset of `fibers` with ok == false
  std::vector<InjectivityFiber> failing;
};

/// Fiberwise rank test: on every fiber of the target spectrum,
/// rank G_{target, measuring}(x) must equal dim J_target(x).
InjectivityReport injectivity_check(const FiberedGeneratorSet& measuring,
                                    const FiberedGeneratorSet& target,
                                    const RankTolerance& tol = {});

/// Generators of A followed by generators of B; spans J_A(x) + J_B(x).
FiberedGeneratorSet union_generators(const FiberedGeneratorSet& set_a, const FiberedGeneratorSet& set_b);

enum class UnionVerdict { Injective, NotInjective, Inapplicable };

struct PairReport {
  std::size_t delta = 0;
  std::size_t theta = 0;
  ClosednessReport closedness;
  InjectivityReport injectivity;
};

struct UnionReport {
  UnionVerdict verdict = UnionVerdict::Injective;
  /// Empty exactly when verdict is Inapplicable.
  std::optional<bool> injective_on_union;
  /// Unordered pairs delta <= theta, in lexicographic order.
  std::vector<PairReport> pairs;
  /// (delta, theta) whose sum fails the closedness hypothesis.
  std::vector<std::pair<std::size_t, std::size_t>> hypothesis_violations;
};

/// Injectivity on the union of the target spaces, valid when every pair of
/// targets has a closed sum. When some pair violates that, the verdict is
/// Inapplicable and no boolean is produced.
UnionReport union_injectivity_check(const FiberedGeneratorSet& measuring,
                                    std::span<const FiberedGeneratorSet> targets,
                                    const RankTolerance& tol = {});

}  // namespace fibercos
