// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "commands.hpp"
#include "config.hpp"
#include "fibercos/fibercos.hpp"

using namespace fibercos;

namespace {

const std::filesystem::path kData = FIBERCOS_TEST_DATA_DIR;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& why) {
    if (!cond) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + why;
    }
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

CVector delta(std::size_t N, std::size_t k) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(N));
  v(static_cast<Eigen::Index>(k)) = 1.0;
  return v;
}

// 1. |fiberwise ess-sup - dense oracle| <= 1e-8 on 200 seeded instances, < 30 s.
Outcome oracle_equivalence() {
  Outcome o;
  CrosscheckOptions opts;
  opts.angle_instances = 200;
  opts.injectivity_instances = 0;
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = crosscheck_suite(opts);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(s.angle_records.size() == 200, "wrong instance count");
  o.require(s.max_angle_deviation <= 1e-8, "deviation " + sci(s.max_angle_deviation));
  for (const auto& f : s.failures) o.require(false, f);
  o.require(secs < 30.0, "runtime " + sci(secs) + " s");
  std::size_t nontrivial = 0;
  for (const auto& r : s.angle_records) nontrivial += r.dense_angle > 0.0 && r.dense_angle < 1.0;
  o.require(nontrivial > 0, "no instance with angle strictly inside (0, 1)");
  if (o.pass) {
    o.detail = "max deviation " + sci(s.max_angle_deviation) + " over 200 instances (" +
               std::to_string(nontrivial) + " with angle in (0,1)), " + sci(secs) + " s";
  }
  return o;
}

// 2. Basis and Gramian routes agree to 1e-9 on every fiber, rank-deficient included.
Outcome route_agreement() {
  Outcome o;
  double worst = 0.0;
  std::size_t fibers = 0, deficient = 0;
  for (std::size_t i = 0; i < 200; ++i) {
    const auto inst = make_random_instance(CrosscheckOptions{}.seed, InstanceFamily::Angle, i);
    const auto a = fiberize_group(inst.first, inst.pair);
    const auto b = fiberize_group(inst.second, inst.pair);
    AngleProfile p;
    try {
      p = ess_sup_angle(a, b);
    } catch (const Error& e) {
      o.require(false, "instance " + std::to_string(i) + ": " + e.what());
      continue;
    }
    for (const auto& f : p.fibers) {
      worst = std::max(worst, std::abs(f.angle - f.gramian_angle));
      ++fibers;
      if (f.in_omega && (f.dim_a < a.generator_count() || f.dim_b < b.generator_count())) ++deficient;
    }
  }
  o.require(worst <= 1e-9, "route deviation " + sci(worst));
  o.require(deficient > 0, "no rank-deficient fiber exercised");
  if (o.pass) {
    o.detail = "max deviation " + sci(worst) + " over " + std::to_string(fibers) + " fibers (" +
               std::to_string(deficient) + " rank-deficient)";
  }
  return o;
}

// 3. Zak unitarity, round trip and intertwining <= 1e-12 over 50 random draws.
Outcome zak_properties() {
  Outcome o;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  double norm_err = 0.0, trip_err = 0.0, twist_err = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    const std::size_t N = std::uniform_int_distribution<std::size_t>(1, 64)(rng);
    std::vector<std::size_t> divs;
    for (std::size_t d = 1; d <= N; ++d) {
      if (N % d == 0) divs.push_back(d);
    }
    const std::size_t M = divs[std::uniform_int_distribution<std::size_t>(0, divs.size() - 1)(rng)];
    const FiniteGroupPair pair(N, M);
    CVector f(static_cast<Eigen::Index>(N));
    for (Eigen::Index k = 0; k < f.size(); ++k) f(k) = Complex(normal(rng), normal(rng));

    const auto z = zak_forward(f, pair);
    norm_err = std::max(norm_err, std::abs(std::sqrt(z.weighted_squared_norm()) - f.norm()));
    trip_err = std::max(trip_err, (zak_inverse(z, pair) - f).cwiseAbs().maxCoeff());
    for (std::size_t g = 0; g < N; g += M) twist_err = std::max(twist_err, intertwine_check(f, g, pair));
  }
  o.require(norm_err <= 1e-12, "norm error " + sci(norm_err));
  o.require(trip_err <= 1e-12, "round-trip error " + sci(trip_err));
  o.require(twist_err <= 1e-12, "intertwining error " + sci(twist_err));
  if (o.pass) {
    o.detail = "norm " + sci(norm_err) + ", round trip " + sci(trip_err) + ", intertwining " + sci(twist_err) +
               " over 50 draws";
  }
  return o;
}

ClosednessReport closedness_of(const char* config) {
  const auto cfg = cli::load_config(kData / config);
  return closedness_diagnosis(cfg.fibered(*cfg.a), cfg.fibered(*cfg.b));
}

// 4. Closedness classifier fixtures.
Outcome closedness_classifier() {
  Outcome o;
  const auto theta = closedness_of("closed_theta.json");
  const double root3 = std::sqrt(3.0) / 2.0;
  o.require(theta.closed, "theta fixture not closed");
  o.require(std::abs(theta.ess_sup_omega_prime - root3) <= 1e-7,
            "theta ess-sup off by " + sci(std::abs(theta.ess_sup_omega_prime - root3)));

  const auto cos = closedness_of("cos_pi_4096.json");
  const double expect = std::cos(kPi / 8192.0);
  o.require(!cos.closed, "cos(pi x) fixture reported closed");
  o.require(std::abs(cos.ess_sup_omega_prime - expect) <= 1e-12, "cos(pi x) max angle " + sci(cos.ess_sup_omega_prime));
  o.require(cos.ess_sup_omega_prime > 1.0 - 1e-6, "cos(pi x) max angle below 1 - 1e-6");

  // Shared direction at x = 0.375 (fiber 1): excluded from omega', where the
  // remaining max is cos(pi/4).
  const auto shared = closedness_of("shared_direction.json");
  FiberIndexSet in_prime;
  for (const auto& f : shared.profile.fibers) {
    if (f.in_omega_prime) in_prime.push_back(f.index);
  }
  o.require(in_prime == FiberIndexSet{0, 2, 3}, "omega' does not exclude the intersection fiber");
  o.require(std::abs(shared.profile.fibers[1].angle - 1.0) <= 1e-12, "intersection fiber angle is not 1");
  o.require(shared.closed && std::abs(shared.ess_sup_omega_prime - std::cos(kPi / 4)) <= 1e-12,
            "shared-direction fixture ess-sup over omega'");
  if (o.pass) {
    o.detail = "theta " + cli::format_real(theta.ess_sup_omega_prime) + " closed; cos(pi x) 1-" +
               sci(1.0 - cos.ess_sup_omega_prime) + " not closed; omega' = {0,2,3}";
  }
  return o;
}

// 5. Fiberwise rank condition vs dense nullspace, plus the delta counterexample.
Outcome sampling_equivalence() {
  Outcome o;
  CrosscheckOptions opts;
  opts.angle_instances = 0;
  opts.injectivity_instances = 100;
  const auto s = crosscheck_suite(opts);
  o.require(s.injectivity_records.size() == 100, "wrong instance count");
  o.require(s.injectivity_disagreements == 0, std::to_string(s.injectivity_disagreements) + " disagreements");
  for (const auto& f : s.failures) o.require(false, f);
  std::size_t injective = 0;
  for (const auto& r : s.injectivity_records) injective += r.dense_injective;
  o.require(injective > 0 && injective < 100, "instances do not exercise both outcomes");

  const FiniteGroupPair pair(4, 2);
  const std::vector<CVector> measuring{delta(4, 0) - delta(4, 2)};
  const std::vector<CVector> target{delta(4, 0)};
  const auto report = injectivity_check(fiberize_group(measuring, pair), fiberize_group(target, pair));
  o.require(!report.injective, "counterexample reported injective");
  o.require(report.failing.size() == 1 && report.failing[0].index == 0 && report.failing[0].x == 0.0,
            "counterexample failing fibers are not exactly {alpha = 0}");
  const CMatrix null = dense_nullspace(sampling_matrix_finite(pair, measuring), dense_space(pair, target));
  bool witness = null.cols() == 1;
  if (witness) {
    CVector v = null.col(0) / null(0, 0);
    witness = (v - (delta(4, 0) + delta(4, 2))).cwiseAbs().maxCoeff() < 1e-12;
  }
  o.require(witness, "dense nullspace is not span{delta_0 + delta_M}");
  if (o.pass) {
    o.detail = "0 disagreements over 100 instances (" + std::to_string(injective) +
               " injective); counterexample fails at alpha=0, nullvector delta_0+delta_M";
  }
  return o;
}

// 6. Union verdict vs dense oracle on every pairwise sum; violated hypothesis is inapplicable.
Outcome union_of_subspaces() {
  Outcome o;
  std::size_t pairs_checked = 0;
  for (const char* name : {"three_targets.json", "three_targets_single_probe.json"}) {
    const auto cfg = cli::load_config(kData / name);
    const auto& pair = *cfg.pair;
    std::vector<FiberedGeneratorSet> targets;
    for (const auto& t : cfg.targets) targets.push_back(cfg.fibered(t));
    o.require(targets.size() == 3, std::string(name) + ": expected three targets");
    const auto report = union_injectivity_check(cfg.fibered(*cfg.measuring), targets);
    o.require(report.hypothesis_violations.empty(), std::string(name) + ": unexpected hypothesis violation");
    o.require(report.injective_on_union.has_value(), std::string(name) + ": no verdict");

    const CMatrix T = sampling_matrix_finite(pair, cfg.set(*cfg.measuring).vectors);
    bool dense_all = true;
    for (const auto& pr : report.pairs) {
      const auto& d = cfg.set(cfg.targets[pr.delta]).vectors;
      const auto& t = cfg.set(cfg.targets[pr.theta]).vectors;
      std::vector<CVector> gens = d;
      if (pr.delta != pr.theta) gens.insert(gens.end(), t.begin(), t.end());
      const bool dense = dense_injectivity(T, dense_space(pair, gens));
      const double angle = dense_sup_angle(dense_space(pair, d), dense_space(pair, t));
      if (pr.delta != pr.theta) o.require(angle < 1.0 - 1e-6, std::string(name) + ": pair angle reaches 1");
      o.require(dense == pr.injectivity.injective, std::string(name) + ": pair verdict differs from dense");
      dense_all = dense_all && dense;
      ++pairs_checked;
    }
    if (report.injective_on_union) {
      o.require(*report.injective_on_union == dense_all, std::string(name) + ": union verdict differs from dense");
    }
  }

  const auto bad = cli::load_config(kData / "violated_hypothesis.json");
  std::vector<FiberedGeneratorSet> targets;
  for (const auto& t : bad.targets) targets.push_back(bad.fibered(t));
  const auto report = union_injectivity_check(bad.fibered(*bad.measuring), targets);
  o.require(report.verdict == UnionVerdict::Inapplicable, "violated fixture not inapplicable");
  o.require(!report.injective_on_union.has_value(), "violated fixture emitted a boolean");
  if (o.pass) {
    o.detail = std::to_string(pairs_checked) + " pairwise sums match the dense oracle; violated fixture inapplicable";
  }
  return o;
}

// 7. Identical config and seed give byte-identical CSV.
Outcome determinism() {
  Outcome o;
  cli::RunOptions opts;
  opts.seed = 7;
  const auto random = cli::load_config(kData / "random_instance.json");
  const auto a = cli::run_angle(random, opts), b = cli::run_angle(random, opts);
  o.require(a.exit_code == 0 && !a.csv.empty(), "angle run failed: " + a.error);
  o.require(a.csv == b.csv && a.report == b.report, "angle output differs between runs");

  const auto cos = cli::load_config(kData / "cos_pi_4096.json");
  o.require(cli::run_closedness(cos).csv == cli::run_closedness(cos).csv, "closedness CSV differs between runs");

  CrosscheckOptions cc;
  cc.seed = 7;
  cc.angle_instances = 30;
  cc.injectivity_instances = 30;
  o.require(cli::run_crosscheck(cc).csv == cli::run_crosscheck(cc).csv, "crosscheck CSV differs between runs");
  if (o.pass) o.detail = "angle, closedness and crosscheck CSVs byte-identical across runs";
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 oracle equivalence", oracle_equivalence},
      {"2 route agreement", route_agreement},
      {"3 zak unitarity and intertwining", zak_properties},
      {"4 closedness classifier", closedness_classifier},
      {"5 sampling equivalence", sampling_equivalence},
      {"6 union of subspaces", union_of_subspaces},
      {"7 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    failed += !o.pass;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
