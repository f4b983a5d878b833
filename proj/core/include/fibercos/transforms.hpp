#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fibercos/fiber_field.hpp"
#include "fibercos/types.hpp"

namespace fibercos {

/// The cyclic group Z_N with subgroup Gamma = M Z_N of order L = N / M.
///
/// Coset representatives are 0..M-1; characters of Gamma are labelled
/// alpha = 0..L-1 with alpha(tM) = exp(2 pi i alpha t / L).
class FiniteGroupPair {
 public:
  FiniteGroupPair(std::size_t N, std::size_t M);

  std::size_t group_order() const noexcept { return N_; }
  std::size_t coset_count() const noexcept { return M_; }
  std::size_t subgroup_order() const noexcept { return N_ / M_; }

  bool is_subgroup_element(std::size_t gamma) const noexcept { return gamma % M_ == 0 && gamma < N_; }

  bool operator==(const FiniteGroupPair&) const = default;

 private:
  std::size_t N_;
  std::size_t M_;
};

/// Zak transform values indexed (alpha, coset), shape L x M. Dual points
/// carry weight 1/L.
struct ZakArray {
  CMatrix values;

  /// sum_alpha (1/L) ||values(alpha, .)||^2
  double weighted_squared_norm() const;
};

/// (Zf)(alpha, c) = sum_{t<L} f(tM + c) exp(-2 pi i alpha t / L).
ZakArray zak_forward(const CVector& f, const FiniteGroupPair& pair);

/// Inverse of zak_forward.
CVector zak_inverse(const ZakArray& z, const FiniteGroupPair& pair);

/// (L_gamma f)(x) = f(x - gamma mod N); gamma is reduced mod N.
CVector translate(const CVector& f, std::size_t gamma);

/// max |Z(L_gamma f) - exp(-2 pi i alpha t / L) Zf| for gamma = tM in Gamma.
double intertwine_check(const CVector& f, std::size_t gamma, const FiniteGroupPair& pair);

/// Fibers alpha = 0..L-1 (coordinate alpha, weight 1/L); generator i at alpha
/// is the row (Z psi_i)(alpha, .) in C^M.
FiberedGeneratorSet fiberize_group(std::span<const CVector> generators, const FiniteGroupPair& pair);

/// Closed-form Fourier-side description xi -> f^(xi) of a function on R.
class FourierProfile {
 public:
  enum class Kind { Gaussian, BSpline, Bandlimit, Delta, WindowedCosine, Sum, CustomTable };

  /// f^(xi) = exp(-a pi xi^2)
  static FourierProfile gaussian(double a);
  /// f^(xi) = sinc(xi)^(p+1), sinc(x) = sin(pi x) / (pi x), sinc(0) = 1
  static FourierProfile bspline(int p);
  /// indicator of [c, d)
  static FourierProfile bandlimit(double c, double d);
  /// f^(xi) = exp(-2 pi i xi t): the Dirac mass at t, only meaningful truncated
  static FourierProfile delta(double t = 0.0);
  /// cos(phase + rate (xi - c)) on [c, d), 0 elsewhere
  static FourierProfile windowed_cosine(double c, double d, double phase, double rate);
  /// sum of terms, each scaled by its coefficient
  static FourierProfile sum(std::vector<std::pair<Complex, FourierProfile>> terms);
  /// linear interpolation of (xi, value) samples; 0 outside the table
  static FourierProfile custom_table(std::vector<std::pair<double, Complex>> samples);
  /// two-column CSV `xi,value` (optional third column: imaginary part)
  static FourierProfile load_custom_table(const std::filesystem::path& path);

  Complex operator()(double xi) const { return eval_(xi); }
  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

  /// Upper bound on sum_{|k|>K} |f^(xi + k)|^2 over xi in [0, 1), when a
  /// closed form is known for this kind.
  std::optional<double> gramian_tail_bound(std::size_t K) const;

 private:
  FourierProfile(Kind kind, std::string name, std::function<Complex(double)> eval,
                 std::vector<double> params = {});

  Kind kind_;
  std::string name_;
  std::function<Complex(double)> eval_;
  std::vector<double> params_;
};

enum class GridRule { Midpoint, LeftEndpoint };

/// Grid xi_j = (j + 0.5)/n on [0, 1) (or j/n for LeftEndpoint); generator i
/// at xi_j is (f^_i(xi_j + k)) for k = -K..K.
FiberedGeneratorSet fiberize_real_line(std::span<const FourierProfile> profiles, std::size_t grid_size,
                                       std::size_t truncation = 64,
                                       GridRule rule = GridRule::Midpoint);

}  // namespace fibercos
