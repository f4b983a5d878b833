#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "fibercos/fibercos.hpp"

using namespace fibercos;

namespace {

std::vector<CVector> random_generators(std::size_t N, std::size_t r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<CVector> out(r, CVector(static_cast<Eigen::Index>(N)));
  for (auto& v : out) {
    for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = Complex(normal(rng), normal(rng));
  }
  return out;
}

void BM_ZakForward(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const FiniteGroupPair pair(N, N / 8);
  const CVector f = random_generators(N, 1, 1).front();
  for (auto _ : state) benchmark::DoNotOptimize(zak_forward(f, pair));
}
BENCHMARK(BM_ZakForward)->RangeMultiplier(4)->Range(64, 4096);

void BM_FiberwiseAngle(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const FiniteGroupPair pair(N, 8);
  const auto a = fiberize_group(random_generators(N, 2, 2), pair);
  const auto b = fiberize_group(random_generators(N, 2, 3), pair);
  for (auto _ : state) benchmark::DoNotOptimize(ess_sup_angle(a, b));
}
BENCHMARK(BM_FiberwiseAngle)->RangeMultiplier(4)->Range(64, 4096);

void BM_DenseAngle(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const FiniteGroupPair pair(N, 8);
  const auto a = random_generators(N, 2, 2), b = random_generators(N, 2, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dense_sup_angle(dense_space(pair, a), dense_space(pair, b)));
  }
}
BENCHMARK(BM_DenseAngle)->RangeMultiplier(4)->Range(64, 256);

void BM_RealLineClosedness(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<FourierProfile> a{FourierProfile::gaussian(1.0)};
  const std::vector<FourierProfile> b{FourierProfile::bspline(2)};
  const auto fa = fiberize_real_line(a, n, 16), fb = fiberize_real_line(b, n, 16);
  for (auto _ : state) benchmark::DoNotOptimize(closedness_diagnosis(fa, fb));
}
BENCHMARK(BM_RealLineClosedness)->RangeMultiplier(4)->Range(64, 4096);

void BM_Crosscheck(benchmark::State& state) {
  CrosscheckOptions opts;
  opts.angle_instances = 20;
  opts.injectivity_instances = 20;
  for (auto _ : state) benchmark::DoNotOptimize(crosscheck_suite(opts));
}
BENCHMARK(BM_Crosscheck)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
