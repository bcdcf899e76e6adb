#include "lacunary/xfloat.hpp"

#include <gmp.h>

#include <cstdio>
#include <stdexcept>

namespace lacunary {

namespace {
constexpr double kLn2 = 0.69314718055994530942;
}

XFloat::XFloat(double v) : mant_(v), exp_(0) {
  if (!std::isfinite(v)) throw std::domain_error("XFloat: non-finite value");
  normalize();
}

XFloat::XFloat(const BigInt& v) {
  long e = 0;
  mant_ = mpz_get_d_2exp(&e, v.backend().data());
  exp_ = e;
  normalize();
}

void XFloat::normalize() {
  if (mant_ == 0.0) {
    exp_ = 0;
    return;
  }
  int e = 0;
  mant_ = std::frexp(mant_, &e);
  exp_ += e;
}

XFloat XFloat::from_log(double log_value) {
  if (log_value == -std::numeric_limits<double>::infinity()) return XFloat();
  if (!std::isfinite(log_value)) throw std::domain_error("XFloat::from_log: non-finite log");
  const double q = log_value / kLn2;
  const double whole = std::floor(q);
  // exp of the fractional remainder computed from the log itself to keep precision
  const double rem = log_value - whole * kLn2;
  return XFloat(std::exp(rem), static_cast<std::int64_t>(whole));
}

XFloat XFloat::pow(XFloat base, std::uint64_t n) {
  XFloat result(1.0);
  while (n != 0) {
    if (n & 1U) result *= base;
    base *= base;
    n >>= 1U;
  }
  return result;
}

double XFloat::log() const {
  if (mant_ == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::fabs(mant_)) + static_cast<double>(exp_) * kLn2;
}

double XFloat::to_double() const {
  if (mant_ == 0.0) return 0.0;
  if (exp_ > 1100) return mant_ > 0 ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity();
  if (exp_ < -1100) return mant_ > 0 ? 0.0 : -0.0;
  return std::ldexp(mant_, static_cast<int>(exp_));
}

XFloat XFloat::abs() const { return XFloat(std::fabs(mant_), exp_); }

XFloat XFloat::sqrt() const {
  if (mant_ < 0.0) throw std::domain_error("XFloat::sqrt of negative value");
  if (mant_ == 0.0) return XFloat();
  if (exp_ % 2 == 0) return XFloat(std::sqrt(mant_), exp_ / 2);
  // odd exponent: fold one factor of two into the mantissa
  const std::int64_t e = exp_ - 1;
  return XFloat(std::sqrt(2.0 * mant_), e / 2);
}

XFloat XFloat::operator-() const { return XFloat(-mant_, exp_); }

XFloat operator*(XFloat a, XFloat b) {
  if (a.mant_ == 0.0 || b.mant_ == 0.0) return XFloat();
  return XFloat(a.mant_ * b.mant_, a.exp_ + b.exp_);
}

XFloat operator/(XFloat a, XFloat b) {
  if (b.mant_ == 0.0) throw std::domain_error("XFloat: division by zero");
  if (a.mant_ == 0.0) return XFloat();
  return XFloat(a.mant_ / b.mant_, a.exp_ - b.exp_);
}

XFloat operator+(XFloat a, XFloat b) {
  if (a.mant_ == 0.0) return b;
  if (b.mant_ == 0.0) return a;
  if (a.exp_ < b.exp_) std::swap(a, b);
  const std::int64_t shift = a.exp_ - b.exp_;
  if (shift > 80) return a;
  return XFloat(a.mant_ + std::ldexp(b.mant_, -static_cast<int>(shift)), a.exp_);
}

bool operator<(XFloat a, XFloat b) {
  const bool an = a.mant_ < 0.0;
  const bool bn = b.mant_ < 0.0;
  if (a.mant_ == 0.0 || b.mant_ == 0.0 || an != bn) return a.mant_ < b.mant_;
  // same sign, both nonzero
  if (a.exp_ != b.exp_) return an ? a.exp_ > b.exp_ : a.exp_ < b.exp_;
  return a.mant_ < b.mant_;
}

std::string XFloat::str() const {
  if (mant_ == 0.0) return "0";
  const double l10 = log() / std::log(10.0);
  const double whole = std::floor(l10);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%.6fe%+.0f", mant_ < 0 ? "-" : "", std::pow(10.0, l10 - whole),
                whole);
  return buf;
}

double log_big(const BigInt& n) {
  if (n <= 0) throw std::domain_error("log_big: argument must be positive");
  return XFloat(n).log();
}

std::uint64_t mod_small(const BigInt& n, std::uint64_t modulus) {
  if (modulus == 0) throw std::invalid_argument("mod_small: zero modulus");
  return mpz_fdiv_ui(n.backend().data(), modulus);
}

std::uint64_t pow3_mod(std::uint64_t m, std::uint64_t modulus) {
  if (modulus == 1) return 0;
  unsigned __int128 result = 1;
  unsigned __int128 base = 3 % modulus;
  while (m != 0) {
    if (m & 1U) result = (result * base) % modulus;
    base = (base * base) % modulus;
    m >>= 1U;
  }
  return static_cast<std::uint64_t>(result);
}

std::string to_decimal(const BigInt& n) { return n.str(); }

BigInt parse_decimal(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty integer string");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(std::isdigit(static_cast<unsigned char>(s[i])) || (i == 0 && s[i] == '-')))
      throw std::invalid_argument("malformed integer string: " + s);
  }
  return BigInt(s);
}

}  // namespace lacunary
