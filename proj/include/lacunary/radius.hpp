#pragma once

#include "lacunary/xfloat.hpp"

#include <string>

namespace lacunary {

/// A radius in [0, 1) kept in exact symbolic form so that 1 - r never has to
/// be materialized. Every derived quantity is computed from the symbolic form.
class RadiusSpec {
 public:
  enum class Kind { SqrtComplement, OneMinusPow3, Plain };

  /// r = (1 - 1/n)^(1/2), n >= 2.
  static RadiusSpec sqrt_complement(const BigInt& n);
  /// r = 1 - 3^-k, k >= 1.
  static RadiusSpec one_minus_pow3(const BigInt& k);
  /// r given directly, 0 <= r < 1. Zero is accepted for point evaluation only.
  static RadiusSpec plain(double r);

  Kind kind() const { return kind_; }
  /// n for SqrtComplement, k for OneMinusPow3, unused for Plain.
  const BigInt& parameter() const { return param_; }
  double plain_value() const { return plain_; }

  /// r rounded to double; may be exactly 1.0 for radii extremely close to one.
  double value() const { return value_; }
  bool is_zero() const { return kind_ == Kind::Plain && plain_ == 0.0; }

  /// log(1 / (1 - r)).
  XFloat log_inv_gap() const { return log_inv_gap_; }
  /// log(1 - r^2); -inf never occurs for valid radii but may fall below the double range.
  double log_one_minus_r_squared() const { return log_1mr2_; }
  double one_minus_r_squared() const { return std::exp(log_1mr2_); }

  /// -log(r) as an extended float. Only available when its binary exponent fits
  /// (OneMinusPow3 with astronomically large k does not).
  bool has_neg_log() const { return has_lambda_; }
  XFloat neg_log() const;

  /// -log(r) = mu * 3^-K with mu in roughly [1/3, 3]; always available for r > 0.
  const BigInt& pow3_scale() const { return scale_k_; }
  double pow3_mantissa() const { return scale_mu_; }

  std::string describe() const;

  friend bool operator==(const RadiusSpec& a, const RadiusSpec& b) {
    return a.kind_ == b.kind_ && a.param_ == b.param_ && a.plain_ == b.plain_;
  }

 private:
  RadiusSpec() = default;
  void set_scale_from_lambda();

  Kind kind_ = Kind::Plain;
  BigInt param_;
  double plain_ = 0.0;
  double value_ = 0.0;
  XFloat log_inv_gap_;
  double log_1mr2_ = 0.0;
  bool has_lambda_ = false;
  XFloat lambda_;
  BigInt scale_k_;
  double scale_mu_ = 1.0;
};

/// Strict ordering of radii without materializing them.
bool radius_less(const RadiusSpec& a, const RadiusSpec& b);

}  // namespace lacunary
