#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fibercos/subspace_geometry.hpp"
#include "fibercos/transforms.hpp"
#include "fibercos/types.hpp"

namespace fibercos {

/// Translation-generated space on Z_N, materialized as an explicit
/// orthonormal basis of C^N.
struct DenseSpace {
  std::size_t ambient_dim = 0;
  Subspace basis{0};
};

/// Orthonormal basis of span{L_gamma psi : psi in generators, gamma in Gamma}.
DenseSpace dense_space(const FiniteGroupPair& pair, std::span<const CVector> generators,
                       const RankTolerance& tol = {});

/// Supremum cosine angle via the largest singular value of Q_B^H Q_A,
/// verified against power_iteration_angle (agreement within 1e-9 or
/// Error(NumericalInconsistency)).
double dense_sup_angle(const DenseSpace& A, const DenseSpace& B);

/// sqrt of the top eigenvalue of P_B P_A P_B, by power iteration with
/// repeated squaring (500 steps max, stop on 1e-12 relative change).
double power_iteration_angle(const DenseSpace& A, const DenseSpace& B);

/// rank(T Q_S) == dim S under the relative cutoff.
bool dense_injectivity(const CMatrix& T, const DenseSpace& S, const RankTolerance& tol = {});

/// Orthonormal basis (columns, in C^N) of {f in S : T f = 0}.
CMatrix dense_nullspace(const CMatrix& T, const DenseSpace& S, const RankTolerance& tol = {});

/// One seeded random finite-group instance.
struct RandomInstance {
  FiniteGroupPair pair{1, 1};
  std::vector<CVector> first;   ///< A for angle instances, measuring for injectivity
  std::vector<CVector> second;  ///< B for angle instances, target for injectivity
  std::string kind;
};

enum class InstanceFamily { Angle, Injectivity };

/// Deterministic in (seed, family, index). N is drawn from [min_order,
/// max_order], M uniformly among divisors of N, r from 1..max_generators,
/// entries complex standard normal; some instances are structured
/// (shared directions, vanishing fibers, zero generators).
RandomInstance make_random_instance(std::uint64_t seed, InstanceFamily family, std::size_t index,
                                    std::size_t min_order = 4, std::size_t max_order = 64,
                                    std::size_t max_generators = 3);

struct CrosscheckOptions {
  std::uint64_t seed = 20240601;
  std::size_t angle_instances = 200;
  std::size_t injectivity_instances = 100;
  std::size_t min_order = 4;
  std::size_t max_order = 64;
  std::size_t max_generators = 3;
  double angle_tolerance = 1e-8;
  double route_tolerance = 1e-9;
  RankTolerance tol{};
};

struct AngleRecord {
  std::size_t index = 0;
  std::string kind;
  std::size_t N = 0, M = 0, r_a = 0, r_b = 0;
  double fiber_angle = 0.0;
  double dense_angle = 0.0;
  double deviation = 0.0;
  double route_deviation = 0.0;
};

struct InjectivityRecord {
  std::size_t index = 0;
  std::string kind;
  std::size_t N = 0, M = 0, r_measuring = 0, r_target = 0;
  bool fiber_injective = false;
  bool dense_injective = false;
};

struct CrosscheckSummary {
  double max_angle_deviation = 0.0;
  double max_route_deviation = 0.0;
  std::size_t injectivity_disagreements = 0;
  std::vector<std::string> failures;
  std::vector<AngleRecord> angle_records;
  std::vector<InjectivityRecord> injectivity_records;

  bool passed() const noexcept { return failures.empty(); }
};

/// Runs the fiberwise pipeline against the dense oracle on seeded instances.
CrosscheckSummary crosscheck_suite(const CrosscheckOptions& options = {});

}  // namespace fibercos
