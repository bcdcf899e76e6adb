#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace lacunary {

using BigInt = boost::multiprecision::mpz_int;

/// Double mantissa with a 64-bit binary exponent. Holds magnitudes such as
/// 2^9800 or 3^-500 that overflow a plain double, at double relative precision.
class XFloat {
 public:
  XFloat() = default;
  XFloat(double v);  // NOLINT(google-explicit-constructor)
  explicit XFloat(const BigInt& v);

  static XFloat from_log(double log_value);
  static XFloat pow(XFloat base, std::uint64_t n);

  double mantissa() const { return mant_; }
  std::int64_t exponent() const { return exp_; }
  bool is_zero() const { return mant_ == 0.0; }
  bool negative() const { return mant_ < 0.0; }

  /// Natural log of |x|; -inf for zero.
  double log() const;
  /// Nearest double; saturates to +-inf or flushes to zero.
  double to_double() const;
  XFloat abs() const;
  XFloat sqrt() const;

  XFloat operator-() const;
  friend XFloat operator*(XFloat a, XFloat b);
  friend XFloat operator/(XFloat a, XFloat b);
  friend XFloat operator+(XFloat a, XFloat b);
  friend XFloat operator-(XFloat a, XFloat b) { return a + (-b); }
  XFloat& operator*=(XFloat b) { return *this = *this * b; }
  XFloat& operator+=(XFloat b) { return *this = *this + b; }

  friend bool operator<(XFloat a, XFloat b);
  friend bool operator>(XFloat a, XFloat b) { return b < a; }
  friend bool operator<=(XFloat a, XFloat b) { return !(b < a); }
  friend bool operator>=(XFloat a, XFloat b) { return !(a < b); }
  friend bool operator==(XFloat a, XFloat b) { return a.mant_ == b.mant_ && a.exp_ == b.exp_; }

  std::string str() const;

 private:
  XFloat(double m, std::int64_t e) : mant_(m), exp_(e) { normalize(); }
  void normalize();

  double mant_ = 0.0;  // |mant_| in [0.5, 1) unless zero
  std::int64_t exp_ = 0;
};

/// log(n) for n > 0, valid far beyond the double range.
double log_big(const BigInt& n);

/// n mod modulus for modulus > 0, result in [0, modulus).
std::uint64_t mod_small(const BigInt& n, std::uint64_t modulus);

/// 3^m mod modulus.
std::uint64_t pow3_mod(std::uint64_t m, std::uint64_t modulus);

/// Decimal string round-trip for big integers.
std::string to_decimal(const BigInt& n);
BigInt parse_decimal(const std::string& s);

}  // namespace lacunary
