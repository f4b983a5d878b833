#include "fibercos/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "fibercos/error.hpp"

namespace fibercos {

namespace {

// exp(-2 pi i k / L) for k = 0..L-1; indexing by (alpha t mod L) keeps the
// phase argument exact.
std::vector<Complex> twiddles(std::size_t L) {
  std::vector<Complex> w(L);
  for (std::size_t k = 0; k < L; ++k) {
    w[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(L));
  }
  return w;
}

void require_length(Eigen::Index got, std::size_t want, const char* what) {
  if (static_cast<std::size_t>(got) != want) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " has length " +
                                                  std::to_string(got) + ", expected " +
                                                  std::to_string(want));
  }
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

// ---------------------------------------------------------------------------
// Finite group realization

FiniteGroupPair::FiniteGroupPair(std::size_t N, std::size_t M) : N_(N), M_(M) {
  if (M == 0 || N == 0 || N % M != 0) {
    throw Error(ErrorKind::InvalidGroupPair,
                "need M >= 1 dividing N, got N=" + std::to_string(N) + " M=" + std::to_string(M));
  }
}

double ZakArray::weighted_squared_norm() const {
  if (values.rows() == 0) return 0.0;
  return values.squaredNorm() / static_cast<double>(values.rows());
}

ZakArray zak_forward(const CVector& f, const FiniteGroupPair& pair) {
  require_length(f.size(), pair.group_order(), "signal");
  const std::size_t M = pair.coset_count();
  const std::size_t L = pair.subgroup_order();
  const auto w = twiddles(L);
  ZakArray z{CMatrix::Zero(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(M))};
  for (std::size_t c = 0; c < M; ++c) {
    for (std::size_t alpha = 0; alpha < L; ++alpha) {
      Complex acc{0.0, 0.0};
      for (std::size_t t = 0; t < L; ++t) {
        acc += f(static_cast<Eigen::Index>(t * M + c)) * w[(alpha * t) % L];
      }
      z.values(static_cast<Eigen::Index>(alpha), static_cast<Eigen::Index>(c)) = acc;
    }
  }
  return z;
}

CVector zak_inverse(const ZakArray& z, const FiniteGroupPair& pair) {
  const std::size_t M = pair.coset_count();
  const std::size_t L = pair.subgroup_order();
  if (static_cast<std::size_t>(z.values.rows()) != L || static_cast<std::size_t>(z.values.cols()) != M) {
    throw Error(ErrorKind::DimensionMismatch,
                "Zak array is " + std::to_string(z.values.rows()) + "x" +
                    std::to_string(z.values.cols()) + ", expected " + std::to_string(L) + "x" +
                    std::to_string(M));
  }
  const auto w = twiddles(L);
  CVector f(static_cast<Eigen::Index>(pair.group_order()));
  for (std::size_t c = 0; c < M; ++c) {
    for (std::size_t t = 0; t < L; ++t) {
      Complex acc{0.0, 0.0};
      for (std::size_t alpha = 0; alpha < L; ++alpha) {
        acc += z.values(static_cast<Eigen::Index>(alpha), static_cast<Eigen::Index>(c)) *
               std::conj(w[(alpha * t) % L]);
      }
      f(static_cast<Eigen::Index>(t * M + c)) = acc / static_cast<double>(L);
    }
  }
  return f;
}

CVector translate(const CVector& f, std::size_t gamma) {
  const auto N = static_cast<std::size_t>(f.size());
  CVector out(f.size());
  if (N == 0) return out;
  const std::size_t shift = gamma % N;
  for (std::size_t x = 0; x < N; ++x) {
    out(static_cast<Eigen::Index>((x + shift) % N)) = f(static_cast<Eigen::Index>(x));
  }
  return out;
}

double intertwine_check(const CVector& f, std::size_t gamma, const FiniteGroupPair& pair) {
  if (!pair.is_subgroup_element(gamma)) {
    throw Error(ErrorKind::InvalidSubgroupElement,
                std::to_string(gamma) + " is not in the subgroup " + std::to_string(pair.coset_count()) +
                    "Z_" + std::to_string(pair.group_order()));
  }
  const std::size_t L = pair.subgroup_order();
  const std::size_t t = gamma / pair.coset_count();
  const auto w = twiddles(L);
  const ZakArray lhs = zak_forward(translate(f, gamma), pair);
  const ZakArray rhs = zak_forward(f, pair);
  double worst = 0.0;
  for (std::size_t alpha = 0; alpha < L; ++alpha) {
    const Complex phase = w[(alpha * t) % L];
    const auto a = static_cast<Eigen::Index>(alpha);
    worst = std::max(worst, (lhs.values.row(a) - phase * rhs.values.row(a)).cwiseAbs().maxCoeff());
  }
  return worst;
}

FiberedGeneratorSet fiberize_group(std::span<const CVector> generators, const FiniteGroupPair& pair) {
  if (generators.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "fiberize_group needs at least one generator");
  }
  const std::size_t L = pair.subgroup_order();
  const std::size_t M = pair.coset_count();
  std::vector<ZakArray> zaks;
  zaks.reserve(generators.size());
  for (const auto& g : generators) zaks.push_back(zak_forward(g, pair));

  std::vector<double> coords(L), weights(L, 1.0 / static_cast<double>(L));
  std::vector<GeneratorFiber> fibers;
  fibers.reserve(L);
  for (std::size_t alpha = 0; alpha < L; ++alpha) {
    coords[alpha] = static_cast<double>(alpha);
    CMatrix cols(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(generators.size()));
    for (std::size_t i = 0; i < zaks.size(); ++i) {
      cols.col(static_cast<Eigen::Index>(i)) =
          zaks[i].values.row(static_cast<Eigen::Index>(alpha)).transpose();
    }
    fibers.emplace_back(std::move(cols));
  }
  return FiberedGeneratorSet(FiberGrid(std::move(coords), std::move(weights)), std::move(fibers));
}

// ---------------------------------------------------------------------------
// Real-line profiles

FourierProfile::FourierProfile(Kind kind, std::string name, std::function<Complex(double)> eval,
                               std::vector<double> params)
    : kind_(kind), name_(std::move(name)), eval_(std::move(eval)), params_(std::move(params)) {}

FourierProfile FourierProfile::gaussian(double a) {
  if (!(a > 0.0)) throw Error(ErrorKind::ProfileEvaluation, "gaussian needs a > 0");
  return FourierProfile(Kind::Gaussian, "gaussian(" + std::to_string(a) + ")",
                        [a](double xi) { return Complex(std::exp(-a * std::numbers::pi * xi * xi), 0.0); },
                        {a});
}

FourierProfile FourierProfile::bspline(int p) {
  if (p < 0) throw Error(ErrorKind::ProfileEvaluation, "bspline needs p >= 0");
  return FourierProfile(Kind::BSpline, "bspline(" + std::to_string(p) + ")",
                        [p](double xi) { return Complex(std::pow(sinc(xi), p + 1), 0.0); },
                        {static_cast<double>(p)});
}

FourierProfile FourierProfile::bandlimit(double c, double d) {
  if (!(c < d)) throw Error(ErrorKind::ProfileEvaluation, "bandlimit needs c < d");
  return FourierProfile(Kind::Bandlimit, "bandlimit(" + std::to_string(c) + "," + std::to_string(d) + ")",
                        [c, d](double xi) { return Complex(xi >= c && xi < d ? 1.0 : 0.0, 0.0); },
                        {c, d});
}

FourierProfile FourierProfile::delta(double t) {
  return FourierProfile(Kind::Delta, "delta(" + std::to_string(t) + ")", [t](double xi) {
    return std::polar(1.0, -2.0 * std::numbers::pi * xi * t);
  }, {t});
}

FourierProfile FourierProfile::windowed_cosine(double c, double d, double phase, double rate) {
  if (!(c < d)) throw Error(ErrorKind::ProfileEvaluation, "windowed cosine needs c < d");
  return FourierProfile(Kind::WindowedCosine, "windowed-cosine", [=](double xi) {
    return Complex(xi >= c && xi < d ? std::cos(phase + rate * (xi - c)) : 0.0, 0.0);
  }, {c, d, phase, rate});
}

FourierProfile FourierProfile::sum(std::vector<std::pair<Complex, FourierProfile>> terms) {
  if (terms.empty()) throw Error(ErrorKind::ProfileEvaluation, "sum profile needs at least one term");
  return FourierProfile(Kind::Sum, "sum", [terms = std::move(terms)](double xi) {
    Complex acc{0.0, 0.0};
    for (const auto& [coeff, profile] : terms) acc += coeff * profile(xi);
    return acc;
  });
}

FourierProfile FourierProfile::custom_table(std::vector<std::pair<double, Complex>> samples) {
  if (samples.size() < 2) throw Error(ErrorKind::ProfileEvaluation, "custom table needs >= 2 rows");
  std::sort(samples.begin(), samples.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].first > samples[i - 1].first)) {
      throw Error(ErrorKind::ProfileEvaluation, "custom table abscissae must be distinct");
    }
  }
  return FourierProfile(Kind::CustomTable, "custom-table", [s = std::move(samples)](double xi) {
    if (xi < s.front().first || xi > s.back().first) return Complex(0.0, 0.0);
    auto hi = std::upper_bound(s.begin(), s.end(), xi,
                               [](double v, const auto& row) { return v < row.first; });
    if (hi == s.end()) return s.back().second;
    auto lo = std::prev(hi);
    const double u = (xi - lo->first) / (hi->first - lo->first);
    return (1.0 - u) * lo->second + u * hi->second;
  });
}

FourierProfile FourierProfile::load_custom_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ProfileEvaluation, "cannot open profile table " + path.string());
  std::vector<std::pair<double, Complex>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double xi = 0.0, re = 0.0, im = 0.0;
    if (!(fields >> xi >> re)) {
      if (rows.empty()) continue;  // header
      throw Error(ErrorKind::ProfileEvaluation,
                  path.string() + ":" + std::to_string(lineno) + ": expected `xi,value`");
    }
    if (!(fields >> im)) im = 0.0;
    rows.emplace_back(xi, Complex(re, im));
  }
  return custom_table(std::move(rows));
}

std::optional<double> FourierProfile::gramian_tail_bound(std::size_t K) const {
  const double k = static_cast<double>(K);
  switch (kind_) {
    case Kind::Gaussian: {
      // |xi + k| >= j for j >= K on both sides; j^2 - K^2 >= (j - K)(2K + 1).
      const double a = params_[0];
      const double lead = std::exp(-2.0 * a * std::numbers::pi * k * k);
      const double ratio = std::exp(-2.0 * a * std::numbers::pi * (2.0 * k + 1.0));
      return 2.0 * lead / (1.0 - ratio);
    }
    case Kind::BSpline: {
      if (K < 2) return std::nullopt;
      const double q = 2.0 * (params_[0] + 1.0);
      return std::pow(2.0 / std::numbers::pi, q) * 2.0 / ((q - 1.0) * std::pow(k - 1.0, q - 1.0));
    }
    case Kind::Bandlimit: {
      // |f^|^2 <= 1, so count the integer shifts k outside [-K, K] that can
      // reach [c, d) from xi in [0, 1).
      const double c = params_[0], d = params_[1];
      const auto lo = static_cast<long long>(std::floor(c));
      const auto hi = static_cast<long long>(std::ceil(d)) - 1;
      double count = 0.0;
      for (long long shift = lo; shift <= hi; ++shift) {
        if (shift > static_cast<long long>(K) || shift < -static_cast<long long>(K)) count += 1.0;
      }
      return count;
    }
    default:
      return std::nullopt;
  }
}

FiberedGeneratorSet fiberize_real_line(std::span<const FourierProfile> profiles, std::size_t grid_size,
                                       std::size_t truncation, GridRule rule) {
  if (profiles.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "fiberize_real_line needs at least one profile");
  }
  FiberGrid grid = rule == GridRule::Midpoint ? FiberGrid::midpoints(grid_size)
                                              : FiberGrid::left_endpoints(grid_size);
  const auto K = static_cast<long long>(truncation);
  const Eigen::Index m = 2 * K + 1;
  std::vector<GeneratorFiber> fibers;
  fibers.reserve(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) {
    const double xi = grid.coords()[j];
    CMatrix cols(m, static_cast<Eigen::Index>(profiles.size()));
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      for (long long shift = -K; shift <= K; ++shift) {
        const Complex v = profiles[i](xi + static_cast<double>(shift));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
          throw Error(ErrorKind::ProfileEvaluation, profiles[i].name() + " is not finite at xi=" +
                                                        std::to_string(xi + static_cast<double>(shift)));
        }
        cols(static_cast<Eigen::Index>(shift + K), static_cast<Eigen::Index>(i)) = v;
      }
    }
    fibers.emplace_back(std::move(cols));
  }
  return FiberedGeneratorSet(std::move(grid), std::move(fibers));
}

}  // namespace fibercos
