#pragma once

#include "lacunary/radius.hpp"
#include "lacunary/xfloat.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace lacunary {

using Complex = std::complex<double>;

/// Nonnegative integer exponent, optionally known to be 3^m.
class BigExponent {
 public:
  BigExponent() = default;
  BigExponent(std::uint64_t v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  explicit BigExponent(BigInt v);
  static BigExponent pow3(std::int64_t m);

  const BigInt& value() const { return value_; }
  std::optional<std::int64_t> pow3_index() const { return pow3_; }
  bool is_zero() const { return value_ == 0; }

  /// value mod n; exact for any size (modular exponentiation for 3^m).
  std::uint64_t mod(std::uint64_t n) const;
  /// value mod 2^64
  std::uint64_t low64() const;

  friend bool operator==(const BigExponent& a, const BigExponent& b) { return a.value_ == b.value_; }
  friend bool operator<(const BigExponent& a, const BigExponent& b) { return a.value_ < b.value_; }

 private:
  BigInt value_ = 0;
  std::optional<std::int64_t> pow3_;
};

struct SeriesTerm {
  Complex coeff;
  BigExponent exponent;
};

/// c_0 + sum_k a_k z^{e_k}, exponents strictly increasing, no zero coefficients.
class SparseSeries {
 public:
  SparseSeries() = default;
  explicit SparseSeries(Complex constant, std::vector<SeriesTerm> terms = {});

  /// 1 + ... style helpers
  static SparseSeries monomial(Complex coeff, BigExponent e);
  /// coeff * sum_{m=s}^{2s} z^{3^m}
  static SparseSeries pow3_block(std::int64_t s, Complex coeff = 1.0);

  Complex constant() const { return constant_; }
  const std::vector<SeriesTerm>& terms() const { return terms_; }
  bool empty() const { return constant_ == Complex{} && terms_.empty(); }

  /// Termwise sum; exponents are merged.
  SparseSeries plus(const SparseSeries& other) const;
  SparseSeries scaled(Complex factor) const;

  /// Point evaluation at a real radius (no angle).
  Complex value_at_zero() const { return constant_; }

 private:
  Complex constant_{};
  std::vector<SeriesTerm> terms_;
};

/// Hadamard-gap and coefficient diagnostics for the stored truncation.
struct LacunaryMembership {
  bool lacunary = false;      ///< every ratio e_{k+1}/e_k >= min_gap_ratio > 1
  double min_gap_ratio = 0;   ///< smallest consecutive exponent ratio
  double sup_coeff = 0;       ///< max |a_k|
  double tail_coeff = 0;      ///< max |a_k| over the last quarter of terms
  bool bloch = false;         ///< bounded coefficients (always true for a finite truncation)
  bool little_bloch = false;  ///< coefficients visibly decay: tail max <= half of the head max
};
LacunaryMembership lacunary_membership(const SparseSeries& f);

/// c_0 + c_1 z + ... + c_D z^D with trailing zeros trimmed.
class DensePolynomial {
 public:
  DensePolynomial() = default;
  explicit DensePolynomial(std::vector<Complex> coeffs);

  const std::vector<Complex>& coeffs() const { return coeffs_; }
  int degree() const { return coeffs_.empty() ? -1 : static_cast<int>(coeffs_.size()) - 1; }
  Complex operator()(Complex z) const;
  DensePolynomial derivative() const;
  DensePolynomial scaled(Complex factor) const;

  /// sum |c_k| r^k, an upper bound for max_{|z|=r} |p|.
  double sup_bound(double r = 1.0) const;
  /// (sum |c_k|^2 r^{2k})^{1/2}: the L2 mean on the circle of radius r.
  double l2_mean(double r = 1.0) const;

 private:
  std::vector<Complex> coeffs_;
};

/// Values f(r e^{2 pi i j / N}) for j = 0..N-1, multiplied by exp(log_weight).
struct CircleSamples {
  RadiusSpec radius = RadiusSpec::plain(0.0);
  std::uint64_t n_samples = 0;
  double log_weight = 0.0;
  std::vector<Complex> values;
};

/// log(r^e) computed from the symbolic radius.
double radial_power(const BigExponent& e, const RadiusSpec& r);

CircleSamples eval_circle(const SparseSeries& f, const RadiusSpec& r, std::uint64_t n,
                          double log_weight = 0.0);
CircleSamples eval_derivative_circle(const SparseSeries& f, const RadiusSpec& r, std::uint64_t n,
                                     double log_weight = 0.0);
/// Stratified random points zeta_j = exp(2 pi i u_j / 2^64), u_j drawn uniformly from the j-th of
/// n equal arcs (n a power of two). Angles e * u_j mod 2^64 are exact, so frequencies only alias
/// modulo 2^64; the values follow the law of f(r zeta) for uniform zeta.
CircleSamples eval_circle_random(const SparseSeries& f, const RadiusSpec& r, std::uint64_t n, std::uint64_t seed);
/// The angles u_j used by eval_circle_random.
std::vector<std::uint64_t> random_circle_points(std::uint64_t n, std::uint64_t seed);

/// Samples of a dense polynomial on the same grid (radius materialized to double).
CircleSamples eval_polynomial_circle(const DensePolynomial& p, const RadiusSpec& r,
                                     std::uint64_t n);

/// U_n(r) = (1 - r^2) n r^{n-1}, with 0^0 = 1.
double u_func(const BigExponent& n, const RadiusSpec& r);
double log_u_func(const BigExponent& n, const RadiusSpec& r);
/// max over 0 <= r < 1 of U_n(r), which equals the Bloch seminorm of z^n.
double u_max(const BigExponent& n);

/// r_n = (1 - 1/n)^(1/2)
RadiusSpec r_opt(const BigExponent& n);

/// sum |a_k|^2 r^{2 e_k} + |c_0|^2: the exact squared L2 mean on the circle.
double parseval_sum(const SparseSeries& f, const RadiusSpec& r);

/// sum_{m=s}^{2s} r^{weight * 3^m} for arbitrarily large s, evaluated in closed form:
/// terms with 3^m * (-log r) negligible are counted, vanishing terms are dropped.
XFloat pow3_block_power_sum(const BigInt& s, const RadiusSpec& r, double weight);

/// Upper bound |f(0)| + sum |a_k| max_r U_{e_k}(r) for the Bloch norm.
double bloch_norm_upper(const SparseSeries& f);

}  // namespace lacunary
