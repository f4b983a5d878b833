#include "fibercos/sampling.hpp"

#include <string>

#include "fibercos/error.hpp"
#include "fibercos/gramian_engine.hpp"

namespace fibercos {

CMatrix sampling_matrix_finite(const FiniteGroupPair& pair, std::span<const CVector> measuring_generators) {
  const std::size_t N = pair.group_order();
  const std::size_t L = pair.subgroup_order();
  const std::size_t r = measuring_generators.size();
  for (const auto& g : measuring_generators) {
    if (static_cast<std::size_t>(g.size()) != N) {
      throw Error(ErrorKind::DimensionMismatch, "measuring generator has length " +
                                                    std::to_string(g.size()) + ", expected " +
                                                    std::to_string(N));
    }
  }
  CMatrix T(static_cast<Eigen::Index>(L * r), static_cast<Eigen::Index>(N));
  for (std::size_t t = 0; t < L; ++t) {
    for (std::size_t i = 0; i < r; ++i) {
      T.row(static_cast<Eigen::Index>(t * r + i)) =
          translate(measuring_generators[i], t * pair.coset_count()).adjoint();
    }
  }
  return T;
}

InjectivityReport injectivity_check(const FiberedGeneratorSet& measuring,
                                    const FiberedGeneratorSet& target, const RankTolerance& tol) {
  require_compatible(measuring, target);
  const auto rf_target = range_function(target, tol);
  const auto rf_measuring = range_function(measuring, tol);
  InjectivityReport report;
  for (std::size_t j = 0; j < target.size(); ++j) {
    InjectivityFiber row;
    row.index = j;
    row.x = target.grid().coords()[j];
    row.dim_target = rf_target[j].dim();
    if (!rf_measuring[j].is_zero()) {
      const auto bounds = fiber_frame_bounds(gramian(measuring.fiber(j)), tol);
      row.measuring_upper_bound = bounds ? bounds->upper : 0.0;
    }
    if (row.dim_target > 0) {
      row.mixed_rank = rf_measuring[j].is_zero()
                           ? 0
                           : numerical_rank(mixed_gramian(target.fiber(j), measuring.fiber(j)).entries, tol);
      row.ok = row.mixed_rank == row.dim_target;
    }
    if (!row.ok) {
      report.injective = false;
      report.failing.push_back(row);
    }
    report.fibers.push_back(row);
  }
  return report;
}

FiberedGeneratorSet union_generators(const FiberedGeneratorSet& set_a, const FiberedGeneratorSet& set_b) {
  require_compatible(set_a, set_b);
  std::vector<GeneratorFiber> fibers;
  fibers.reserve(set_a.size());
  for (std::size_t j = 0; j < set_a.size(); ++j) {
    const CMatrix& a = set_a.fiber(j).vectors();
    const CMatrix& b = set_b.fiber(j).vectors();
    CMatrix joined(a.rows(), a.cols() + b.cols());
    joined.leftCols(a.cols()) = a;
    joined.rightCols(b.cols()) = b;
    fibers.emplace_back(std::move(joined));
  }
  return FiberedGeneratorSet(set_a.grid(), std::move(fibers));
}

UnionReport union_injectivity_check(const FiberedGeneratorSet& measuring,
                                    std::span<const FiberedGeneratorSet> targets,
                                    const RankTolerance& tol) {
  if (targets.empty()) throw Error(ErrorKind::EmptyTargets, "union check needs at least one target");
  for (const auto& t : targets) require_compatible(measuring, t);

  UnionReport report;
  bool all_injective = true;
  for (std::size_t d = 0; d < targets.size(); ++d) {
    for (std::size_t th = d; th < targets.size(); ++th) {
      PairReport pr;
      pr.delta = d;
      pr.theta = th;
      pr.closedness = closedness_diagnosis(targets[d], targets[th], tol);
      if (!pr.closedness.closed) report.hypothesis_violations.emplace_back(d, th);
      // N_{d,d} = N_d, so the diagonal uses the target itself.
      pr.injectivity = d == th ? injectivity_check(measuring, targets[d], tol)
                               : injectivity_check(measuring, union_generators(targets[d], targets[th]), tol);
      all_injective = all_injective && pr.injectivity.injective;
      report.pairs.push_back(std::move(pr));
    }
  }
  if (!report.hypothesis_violations.empty()) {
    report.verdict = UnionVerdict::Inapplicable;
    report.injective_on_union.reset();
  } else {
    report.verdict = all_injective ? UnionVerdict::Injective : UnionVerdict::NotInjective;
    report.injective_on_union = all_injective;
  }
  return report;
}

}  // namespace fibercos
