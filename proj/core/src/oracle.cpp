#include "fibercos/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/SVD>

#include "fibercos/error.hpp"
#include "fibercos/fiber_field.hpp"
#include "fibercos/gramian_engine.hpp"
#include "fibercos/sampling.hpp"

namespace fibercos {

namespace {

constexpr double kDenseMethodAgreement = 1e-9;
constexpr int kPowerMaxSteps = 500;
// Squaring steps always taken before the relative-change stop may fire;
// with eigenvalue ratio rho the residual weight is rho^(2^steps).
constexpr int kPowerMinSteps = 40;
constexpr double kPowerRelativeChange = 1e-12;

CMatrix projector(const DenseSpace& S) {
  const CMatrix& Q = S.basis.basis();
  return Q * Q.adjoint();
}

void require_same_ambient(const DenseSpace& A, const DenseSpace& B) {
  if (A.ambient_dim != B.ambient_dim) {
    throw Error(ErrorKind::DimensionMismatch, "dense spaces live in C^" + std::to_string(A.ambient_dim) +
                                                  " and C^" + std::to_string(B.ambient_dim));
  }
}

CMatrix restricted_sampling(const CMatrix& T, const DenseSpace& S) {
  if (static_cast<std::size_t>(T.cols()) != S.ambient_dim) {
    throw Error(ErrorKind::DimensionMismatch, "sampling matrix has " + std::to_string(T.cols()) +
                                                  " columns, space lives in C^" +
                                                  std::to_string(S.ambient_dim));
  }
  return T * S.basis.basis();
}

class InstanceRng {
 public:
  InstanceRng(std::uint64_t seed, InstanceFamily family, std::size_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(family), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(static_cast<std::uint64_t>(index) >> 32)};
    engine_.seed(seq);
  }

  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }

  Complex normal() {
    std::normal_distribution<double> dist(0.0, 1.0);
    const double re = dist(engine_);
    const double im = dist(engine_);
    return {re, im};
  }

  CVector vector(std::size_t n) {
    CVector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = normal();
    return v;
  }

  std::vector<CVector> vectors(std::size_t count, std::size_t n) {
    std::vector<CVector> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(vector(n));
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

// psi - L_M psi: its Zak transform vanishes at alpha = 0.
std::vector<CVector> annihilate_trivial_character(const std::vector<CVector>& gens,
                                                  const FiniteGroupPair& pair) {
  std::vector<CVector> out;
  for (const auto& g : gens) out.push_back(g - translate(g, pair.coset_count()));
  return out;
}

}  // namespace

DenseSpace dense_space(const FiniteGroupPair& pair, std::span<const CVector> generators,
                       const RankTolerance& tol) {
  const std::size_t N = pair.group_order();
  const std::size_t L = pair.subgroup_order();
  CMatrix translates(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(L * generators.size()));
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (static_cast<std::size_t>(generators[i].size()) != N) {
      throw Error(ErrorKind::DimensionMismatch, "generator has length " +
                                                    std::to_string(generators[i].size()) +
                                                    ", expected " + std::to_string(N));
    }
    for (std::size_t t = 0; t < L; ++t) {
      translates.col(static_cast<Eigen::Index>(i * L + t)) =
          translate(generators[i], t * pair.coset_count());
    }
  }
  return DenseSpace{N, orthonormal_basis(translates, tol)};
}

double power_iteration_angle(const DenseSpace& A, const DenseSpace& B) {
  require_same_ambient(A, B);
  if (A.basis.is_zero() || B.basis.is_zero()) return 0.0;
  const CMatrix PB = projector(B);
  const CMatrix op = PB * projector(A) * PB;
  const double scale = op.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return 0.0;

  CMatrix power = op / scale;
  double estimate = 0.0;
  for (int step = 1; step <= kPowerMaxSteps; ++step) {
    power = (power * power).eval();
    const double s = power.cwiseAbs().maxCoeff();
    if (!(s > 0.0)) break;
    power /= s;
    Eigen::Index best = 0;
    power.colwise().squaredNorm().maxCoeff(&best);
    const CVector v = power.col(best);
    const double next = (v.adjoint() * op * v)(0).real() / v.squaredNorm();
    const bool settled = std::abs(next - estimate) <= kPowerRelativeChange * std::abs(next);
    estimate = next;
    if (step >= kPowerMinSteps && settled) break;
  }
  return std::sqrt(std::clamp(estimate, 0.0, 1.0));
}

double dense_sup_angle(const DenseSpace& A, const DenseSpace& B) {
  require_same_ambient(A, B);
  const double by_svd = sup_cosine_angle(A.basis, B.basis);
  const double by_power = power_iteration_angle(A, B);
  if (std::abs(by_svd - by_power) > kDenseMethodAgreement) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "dense angle methods disagree: svd " << by_svd << " vs power iteration " << by_power;
    throw Error(ErrorKind::NumericalInconsistency, msg.str());
  }
  return by_svd;
}

bool dense_injectivity(const CMatrix& T, const DenseSpace& S, const RankTolerance& tol) {
  const CMatrix TQ = restricted_sampling(T, S);
  return numerical_rank(TQ, tol) == S.basis.dim();
}

CMatrix dense_nullspace(const CMatrix& T, const DenseSpace& S, const RankTolerance& tol) {
  const CMatrix TQ = restricted_sampling(T, S);
  const auto k = static_cast<Eigen::Index>(S.basis.dim());
  if (k == 0) return CMatrix(static_cast<Eigen::Index>(S.ambient_dim), 0);
  const std::size_t rank = numerical_rank(TQ, tol);
  Eigen::JacobiSVD<CMatrix> svd(TQ, Eigen::ComputeFullV);
  const auto nullity = k - static_cast<Eigen::Index>(rank);
  return S.basis.basis() * svd.matrixV().rightCols(nullity);
}

RandomInstance make_random_instance(std::uint64_t seed, InstanceFamily family, std::size_t index,
                                    std::size_t min_order, std::size_t max_order,
                                    std::size_t max_generators) {
  InstanceRng rng(seed, family, index);
  const std::size_t N = rng.uniform(min_order, max_order);
  std::vector<std::size_t> divisors;
  for (std::size_t d = 1; d <= N; ++d) {
    if (N % d == 0) divisors.push_back(d);
  }
  const std::size_t M = divisors[rng.uniform(0, divisors.size() - 1)];
  RandomInstance inst{FiniteGroupPair(N, M), {}, {}, "plain"};
  const std::size_t r1 = rng.uniform(1, max_generators);
  const std::size_t r2 = rng.uniform(1, max_generators);
  inst.first = rng.vectors(r1, N);
  inst.second = rng.vectors(r2, N);

  if (family == InstanceFamily::Angle) {
    if (index == 0) {
      inst.kind = "zero";
      for (auto& g : inst.second) g.setZero();
      return inst;
    }
    switch (index % 5) {
      case 1: {
        // B contains a combination of A's generators: fibers intersect.
        inst.kind = "shared";
        CVector shared = CVector::Zero(static_cast<Eigen::Index>(N));
        for (const auto& g : inst.first) shared += rng.normal() * g;
        inst.second.back() = shared;
        break;
      }
      case 2:
        inst.kind = "vanishing";
        inst.first = annihilate_trivial_character(inst.first, inst.pair);
        break;
      case 3: {
        // Linearly dependent generators: rank-deficient Gramians.
        inst.kind = "dependent";
        const CVector extra = rng.normal() * inst.first.front() + rng.normal() * inst.second.front();
        inst.first.push_back(extra);
        inst.second.push_back(inst.second.front() * rng.normal());
        break;
      }
      default:
        break;
    }
    return inst;
  }

  if (index == 0) {
    inst.kind = "zero-measuring";
    for (auto& g : inst.first) g.setZero();
    return inst;
  }
  switch (index % 4) {
    case 1:
      inst.kind = "vanishing-measuring";
      inst.first = annihilate_trivial_character(inst.first, inst.pair);
      break;
    case 2:
      inst.kind = "vanishing-target";
      inst.second = annihilate_trivial_character(inst.second, inst.pair);
      break;
    case 3:
      inst.kind = "vanishing-both";
      inst.first = annihilate_trivial_character(inst.first, inst.pair);
      inst.second = annihilate_trivial_character(inst.second, inst.pair);
      break;
    default:
      break;
  }
  return inst;
}

CrosscheckSummary crosscheck_suite(const CrosscheckOptions& options) {
  CrosscheckSummary summary;
  const auto fail = [&summary](const std::string& what) { summary.failures.push_back(what); };

  for (std::size_t i = 0; i < options.angle_instances; ++i) {
    const auto inst = make_random_instance(options.seed, InstanceFamily::Angle, i, options.min_order,
                                           options.max_order, options.max_generators);
    AngleRecord rec;
    rec.index = i;
    rec.kind = inst.kind;
    rec.N = inst.pair.group_order();
    rec.M = inst.pair.coset_count();
    rec.r_a = inst.first.size();
    rec.r_b = inst.second.size();
    try {
      const auto profile = ess_sup_angle(fiberize_group(inst.first, inst.pair),
                                         fiberize_group(inst.second, inst.pair), options.tol);
      rec.fiber_angle = profile.ess_sup_omega;
      rec.route_deviation = profile.max_route_deviation;
      rec.dense_angle = dense_sup_angle(dense_space(inst.pair, inst.first, options.tol),
                                        dense_space(inst.pair, inst.second, options.tol));
      rec.deviation = std::abs(rec.fiber_angle - rec.dense_angle);
    } catch (const Error& e) {
      fail("angle instance " + std::to_string(i) + ": " + e.what());
      summary.angle_records.push_back(rec);
      continue;
    }
    summary.max_angle_deviation = std::max(summary.max_angle_deviation, rec.deviation);
    summary.max_route_deviation = std::max(summary.max_route_deviation, rec.route_deviation);
    if (!(rec.deviation <= options.angle_tolerance)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "angle instance " << i << " (" << rec.kind << "): fiber " << rec.fiber_angle << " vs dense "
          << rec.dense_angle;
      fail(msg.str());
    }
    if (!(rec.route_deviation <= options.route_tolerance)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "angle instance " << i << " (" << rec.kind << "): route deviation " << rec.route_deviation;
      fail(msg.str());
    }
    summary.angle_records.push_back(rec);
  }

  for (std::size_t i = 0; i < options.injectivity_instances; ++i) {
    const auto inst = make_random_instance(options.seed, InstanceFamily::Injectivity, i,
                                           options.min_order, options.max_order, options.max_generators);
    InjectivityRecord rec;
    rec.index = i;
    rec.kind = inst.kind;
    rec.N = inst.pair.group_order();
    rec.M = inst.pair.coset_count();
    rec.r_measuring = inst.first.size();
    rec.r_target = inst.second.size();
    try {
      rec.fiber_injective = injectivity_check(fiberize_group(inst.first, inst.pair),
                                              fiberize_group(inst.second, inst.pair), options.tol)
                                .injective;
      rec.dense_injective = dense_injectivity(sampling_matrix_finite(inst.pair, inst.first),
                                              dense_space(inst.pair, inst.second, options.tol), options.tol);
    } catch (const Error& e) {
      fail("injectivity instance " + std::to_string(i) + ": " + e.what());
      summary.injectivity_records.push_back(rec);
      continue;
    }
    if (rec.fiber_injective != rec.dense_injective) {
      ++summary.injectivity_disagreements;
      fail("injectivity instance " + std::to_string(i) + " (" + rec.kind + "): fiberwise " +
           (rec.fiber_injective ? "injective" : "not injective") + ", dense " +
           (rec.dense_injective ? "injective" : "not injective"));
    }
    summary.injectivity_records.push_back(rec);
  }
  return summary;
}

}  // namespace fibercos
