#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fibercos/error.hpp"
#include "fibercos/fiber_field.hpp"
#include "fibercos/transforms.hpp"
#include "test_support.hpp"

using namespace fibercos;
using fibercos::testing::basis_vector;
using fibercos::testing::max_abs;
using fibercos::testing::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

// Textbook O(N^2) reference: subsample each coset and take its DFT.
CMatrix reference_zak(const CVector& f, std::size_t N, std::size_t M) {
  const std::size_t L = N / M;
  CMatrix out(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(M));
  for (std::size_t c = 0; c < M; ++c) {
    for (std::size_t a = 0; a < L; ++a) {
      Complex acc = 0.0;
      for (std::size_t t = 0; t < L; ++t) {
        const double arg = -2.0 * kPi * static_cast<double>(a) * static_cast<double>(t) / static_cast<double>(L);
        acc += f(static_cast<Eigen::Index>(t * M + c)) * std::exp(Complex(0.0, arg));
      }
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) = acc;
    }
  }
  return out;
}

std::vector<std::size_t> divisors(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d == 0) out.push_back(d);
  }
  return out;
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x); }

}  // namespace

TEST_CASE("FiniteGroupPair validation") {
  CHECK_THROWS_AS(FiniteGroupPair(6, 4), Error);
  CHECK_THROWS_AS(FiniteGroupPair(6, 0), Error);
  CHECK_THROWS_AS(FiniteGroupPair(0, 1), Error);
  const FiniteGroupPair p(12, 3);
  CHECK(p.subgroup_order() == 4);
  CHECK(p.is_subgroup_element(9));
  CHECK_FALSE(p.is_subgroup_element(4));
  CHECK_FALSE(p.is_subgroup_element(12));
}

TEST_CASE("zak_forward examples") {
  const FiniteGroupPair p(4, 2);
  const auto z0 = zak_forward(basis_vector(4, 0), p);
  REQUIRE(z0.values.rows() == 2);
  REQUIRE(z0.values.cols() == 2);
  CHECK(max_abs(z0.values.col(0) - CVector::Ones(2)) == 0.0);
  CHECK(max_abs(z0.values.col(1)) == 0.0);

  const auto zM = zak_forward(basis_vector(4, 2), p);
  for (int a = 0; a < 2; ++a) {
    CHECK(std::abs(zM.values(a, 0) - std::exp(Complex(0.0, -2.0 * kPi * a / 2.0))) < 1e-15);
    CHECK(zM.values(a, 1) == Complex(0.0, 0.0));
  }
  CHECK_THROWS_AS(zak_forward(CVector::Ones(5), p), Error);
}

TEST_CASE("zak_forward matches the reference DFT bank") {
  Rng rng(5);
  for (std::size_t N : {6u, 12u, 30u, 64u}) {
    for (std::size_t M : divisors(N)) {
      const CVector f = rng.vector(N);
      CHECK(max_abs(zak_forward(f, FiniteGroupPair(N, M)).values - reference_zak(f, N, M)) < 1e-11);
    }
  }
}

TEST_CASE("Zak transform is unitary with dual weights 1/L") {
  Rng rng(7);
  const FiniteGroupPair p(12, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector f = rng.vector(12);
    const double nf = f.squaredNorm();
    CHECK(std::abs(zak_forward(f, p).weighted_squared_norm() - nf) <= 1e-12 * std::max(1.0, nf));
  }
}

TEST_CASE("zak_inverse round trips") {
  const FiniteGroupPair p(4, 2);
  CHECK(max_abs(zak_inverse(zak_forward(basis_vector(4, 0), p), p) - basis_vector(4, 0)) < 1e-15);
  const CVector ones = CVector::Ones(8);
  const FiniteGroupPair q(8, 2);
  CHECK(max_abs(zak_inverse(zak_forward(ones, q), q) - ones) < 1e-15);

  Rng rng(11);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t N = rng.index(1, 64);
    const auto ds = divisors(N);
    const std::size_t M = ds[rng.index(0, ds.size() - 1)];
    const FiniteGroupPair pair(N, M);
    const CVector f = rng.vector(N);
    worst = std::max(worst, max_abs(zak_inverse(zak_forward(f, pair), pair) - f));
    ZakArray z{rng.matrix(pair.subgroup_order(), M)};
    worst = std::max(worst, max_abs(zak_forward(zak_inverse(z, pair), pair).values - z.values));
  }
  CHECK(worst < 1e-12);

  CHECK_THROWS_AS(zak_inverse(ZakArray{CMatrix::Zero(3, 2)}, p), Error);
}

TEST_CASE("translate properties") {
  CHECK(translate(basis_vector(4, 0), 2) == basis_vector(4, 2));
  Rng rng(13);
  const CVector f = rng.vector(10);
  CHECK(translate(f, 0) == f);
  CHECK(translate(f, 10) == f);
  for (std::size_t a = 0; a < 10; ++a) {
    for (std::size_t b = 0; b < 10; ++b) {
      CHECK(translate(translate(f, a), b) == translate(f, (a + b) % 10));
    }
  }
  // (L_g f)(x) = f(x - g)
  const CVector g = translate(f, 3);
  for (Eigen::Index x = 0; x < 10; ++x) CHECK(g(x) == f((x + 7) % 10));
}

TEST_CASE("intertwine_check") {
  const FiniteGroupPair p(4, 2);
  Rng rng(17);
  CHECK(intertwine_check(rng.vector(4), 0, p) == 0.0);
  CHECK(intertwine_check(basis_vector(4, 0), 2, p) < 1e-15);

  const FiniteGroupPair q(24, 4);
  for (int trial = 0; trial < 10; ++trial) {
    const CVector f = rng.vector(24);
    for (std::size_t g = 0; g < 24; g += 4) CHECK(intertwine_check(f, g, q) < 1e-12);
  }
  CHECK_THROWS_AS(intertwine_check(rng.vector(24), 2, q), Error);
  try {
    intertwine_check(rng.vector(24), 5, q);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidSubgroupElement);
  }
}

TEST_CASE("fiberize_group examples") {
  const FiniteGroupPair p(4, 2);
  const std::vector<CVector> d0{basis_vector(4, 0)};
  const auto set = fiberize_group(d0, p);
  REQUIRE(set.size() == 2);
  CHECK(set.grid().coords() == std::vector<double>{0.0, 1.0});
  CHECK(set.grid().weights() == std::vector<double>{0.5, 0.5});
  for (const auto& fib : set.fibers()) CHECK(max_abs(fib.vectors() - basis_vector(2, 0)) < 1e-15);
  for (const auto& J : range_function(set)) CHECK(J.dim() == 1);

  // delta_0 - delta_M on N = 12, M = 3: fiber (1 - e^{-2 pi i a / L}) e_0.
  const FiniteGroupPair q(12, 3);
  const std::vector<CVector> diff{basis_vector(12, 0) - basis_vector(12, 3)};
  const auto vs = fiberize_group(diff, q);
  for (std::size_t a = 0; a < 4; ++a) {
    const Complex expect = 1.0 - std::exp(Complex(0.0, -2.0 * kPi * static_cast<double>(a) / 4.0));
    CHECK(max_abs(vs.fiber(a).vectors() - expect * basis_vector(3, 0)) < 1e-14);
  }
  CHECK(spectrum(range_function(vs)) == FiberIndexSet{1, 2, 3});

  CHECK_THROWS_AS(fiberize_group(std::vector<CVector>{}, q), Error);
  CHECK_THROWS_AS(fiberize_group(std::vector<CVector>{CVector::Ones(5)}, q), Error);
}

TEST_CASE("fiberize_group preserves the generator norm") {
  Rng rng(19);
  const FiniteGroupPair p(18, 6);
  const std::vector<CVector> gens{rng.vector(18), rng.vector(18)};
  const auto set = fiberize_group(gens, p);
  const double direct = gens[0].squaredNorm() + gens[1].squaredNorm();
  CHECK(set.squared_norm() == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("FourierProfile built-ins") {
  CHECK(FourierProfile::gaussian(1.0)(0.0) == Complex(1.0, 0.0));
  CHECK(FourierProfile::gaussian(2.0)(0.5).real() == doctest::Approx(std::exp(-2.0 * kPi * 0.25)));
  CHECK(FourierProfile::bspline(0)(0.0) == Complex(1.0, 0.0));
  CHECK(FourierProfile::bspline(1)(0.5).real() == doctest::Approx(std::pow(2.0 / kPi, 2)));
  CHECK(std::abs(FourierProfile::bspline(2)(3.0)) < 1e-15);
  const auto band = FourierProfile::bandlimit(0.0, 1.0);
  CHECK(band(0.0) == Complex(1.0, 0.0));
  CHECK(band(1.0) == Complex(0.0, 0.0));
  CHECK(band(-0.1) == Complex(0.0, 0.0));
  CHECK(std::abs(FourierProfile::delta(0.25)(1.0) - Complex(0.0, -1.0)) < 1e-15);
  const auto wc = FourierProfile::windowed_cosine(0.0, 1.0, 0.0, kPi / 2.0);
  CHECK(wc(0.0).real() == doctest::Approx(1.0));
  CHECK(wc(1.0) == Complex(0.0, 0.0));
  const auto s = FourierProfile::sum({{Complex(2.0, 0.0), band}, {Complex(0.0, 1.0), band}});
  CHECK(s(0.5) == Complex(2.0, 1.0));

  CHECK_THROWS_AS(FourierProfile::gaussian(0.0), Error);
  CHECK_THROWS_AS(FourierProfile::bspline(-1), Error);
  CHECK_THROWS_AS(FourierProfile::bandlimit(1.0, 1.0), Error);
  CHECK_THROWS_AS(FourierProfile::sum({}), Error);
}

TEST_CASE("custom table interpolation and loading") {
  const auto t = FourierProfile::custom_table({{1.0, Complex(3.0, 0.0)}, {0.0, Complex(1.0, 0.0)}});
  CHECK(t(0.25).real() == doctest::Approx(1.5));
  CHECK(t(1.0).real() == doctest::Approx(3.0));
  CHECK(t(1.5) == Complex(0.0, 0.0));
  CHECK_THROWS_AS(FourierProfile::custom_table({{0.0, 1.0}}), Error);
  CHECK_THROWS_AS(FourierProfile::custom_table({{0.0, 1.0}, {0.0, 2.0}}), Error);

  const auto path = std::filesystem::temp_directory_path() / "fibercos_profile_table.csv";
  {
    std::ofstream out(path);
    out << "xi,value,im\n0,1,0\n0.5,0,2\n1,1\n";
  }
  const auto loaded = FourierProfile::load_custom_table(path);
  CHECK(loaded.kind() == FourierProfile::Kind::CustomTable);
  CHECK(std::abs(loaded(0.25) - Complex(0.5, 1.0)) < 1e-15);
  CHECK(std::abs(loaded(0.75) - Complex(0.5, 1.0)) < 1e-15);
  {
    std::ofstream out(path);
    out << "xi,value\n0,1\nbroken\n";
  }
  CHECK_THROWS_AS(FourierProfile::load_custom_table(path), Error);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(FourierProfile::load_custom_table(path), Error);
}

TEST_CASE("fiberize_real_line with band-limited profiles") {
  const std::vector<FourierProfile> band{FourierProfile::bandlimit(0.0, 1.0)};
  const auto set = fiberize_real_line(band, 16, 4);
  REQUIRE(set.fiber_dim() == 9);
  for (const auto& fib : set.fibers()) {
    CHECK(max_abs(fib.vectors() - basis_vector(9, 4)) == 0.0);
    CHECK(max_abs(gramian(fib).entries - CMatrix::Identity(1, 1)) == 0.0);
  }

  const std::vector<FourierProfile> other{FourierProfile::bandlimit(1.0, 2.0)};
  const auto set_b = fiberize_real_line(other, 16, 4);
  for (std::size_t j = 0; j < 16; ++j) {
    CHECK(max_abs(mixed_gramian(set.fiber(j), set_b.fiber(j)).entries) == 0.0);
  }
  CHECK(ess_sup_angle(set, set_b).ess_sup_omega == 0.0);

  // Overlapping bands: Gramian entries are the overlap lengths of the shifted
  // indicators, here 0 or 1 per fiber since bands have integer endpoints.
  const std::vector<FourierProfile> wide{FourierProfile::bandlimit(-1.0, 2.0)};
  const auto w = fiberize_real_line(wide, 8, 4);
  for (const auto& fib : w.fibers()) CHECK(gramian(fib).entries(0, 0).real() == 3.0);

  const auto left = fiberize_real_line(band, 4, 2, GridRule::LeftEndpoint);
  CHECK(left.grid().coords() == std::vector<double>{0.0, 0.25, 0.5, 0.75});
}

TEST_CASE("fiberize_real_line: bspline Gramian and tail bound") {
  const std::size_t K = 64;
  const std::vector<FourierProfile> bs{FourierProfile::bspline(1)};
  const auto set = fiberize_real_line(bs, 2, K);  // midpoints 0.25, 0.75
  const auto set_half = fiberize_real_line(bs, 1, K);  // midpoint 0.5
  const double truncated = gramian(set_half.fiber(0)).entries(0, 0).real();

  // Independent series at much larger truncation.
  double series = 0.0;
  for (long k = -200000; k <= 200000; ++k) series += std::pow(sinc(0.5 + static_cast<double>(k)), 4);
  const auto bound = FourierProfile::bspline(1).gramian_tail_bound(K);
  REQUIRE(bound.has_value());
  CHECK(*bound == doctest::Approx(std::pow(2.0 / kPi, 4) * 2.0 / (3.0 * std::pow(63.0, 3))));
  CHECK(series - truncated >= 0.0);
  CHECK(series - truncated <= *bound);
  // The classical closed form sum_k sinc(xi + k)^4 = (2 + cos 2 pi xi) / 3 at xi = 1/2.
  CHECK(series == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(set.size() == 2);

  CHECK_FALSE(FourierProfile::bspline(1).gramian_tail_bound(1).has_value());
  CHECK_FALSE(FourierProfile::delta(0.0).gramian_tail_bound(8).has_value());
}

TEST_CASE("gramian_tail_bound bounds the actual tail") {
  for (double a : {0.05, 0.5, 2.0}) {
    const auto g = FourierProfile::gaussian(a);
    for (std::size_t K : {1u, 3u, 8u}) {
      const auto bound = g.gramian_tail_bound(K);
      REQUIRE(bound.has_value());
      for (double xi : {0.0, 0.3, 0.999}) {
        double tail = 0.0;
        for (long k = static_cast<long>(K) + 1; k < 400; ++k) {
          tail += std::norm(g(xi + static_cast<double>(k))) + std::norm(g(xi - static_cast<double>(k)));
        }
        CHECK(tail <= *bound * (1.0 + 1e-12));
      }
    }
  }
  CHECK(*FourierProfile::bandlimit(0.0, 1.0).gramian_tail_bound(0) == 0.0);
  CHECK(*FourierProfile::bandlimit(-3.0, 3.0).gramian_tail_bound(1) == 3.0);
}

TEST_CASE("fiberize_real_line rejects non-finite profile values") {
  const std::vector<FourierProfile> bad{
      FourierProfile::custom_table({{0.0, Complex(std::nan(""), 0.0)}, {1.0, 0.0}})};
  CHECK_THROWS_AS(fiberize_real_line(bad, 4, 1), Error);
  CHECK_THROWS_AS(fiberize_real_line(std::vector<FourierProfile>{}, 4, 1), Error);
}
