#include "lacunary/radius.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace lacunary {

namespace {

constexpr double kLn3 = 1.09861228866810969140;

// -log1p(-x) / x for x in (0, 1)
double neg_log1p_ratio(double x) {
  if (x < 1e-8) return 1.0 + x / 2.0 + x * x / 3.0;
  return -std::log1p(-x) / x;
}

}  // namespace

RadiusSpec RadiusSpec::sqrt_complement(const BigInt& n) {
  if (n < 2) throw std::domain_error("sqrt_complement radius needs n >= 2 (n = 1 gives r = 0)");
  RadiusSpec r;
  r.kind_ = Kind::SqrtComplement;
  r.param_ = n;
  const XFloat inv_n = XFloat(1.0) / XFloat(n);
  const double x = inv_n.to_double();
  // -log r = -1/2 log(1 - 1/n) = (x/2) * (1 + x/2 + x^2/3 + ...)
  r.lambda_ = inv_n * XFloat(0.5 * neg_log1p_ratio(x));
  r.has_lambda_ = true;
  r.value_ = std::sqrt(1.0 - x);
  // 1 - r = (1/n) / (1 + r)
  r.log_inv_gap_ = XFloat(log_big(n) + std::log1p(r.value_));
  r.log_1mr2_ = -log_big(n);
  r.set_scale_from_lambda();
  return r;
}

RadiusSpec RadiusSpec::one_minus_pow3(const BigInt& k) {
  if (k < 1) throw std::domain_error("one_minus_pow3 radius needs k >= 1");
  RadiusSpec r;
  r.kind_ = Kind::OneMinusPow3;
  r.param_ = k;
  r.log_inv_gap_ = XFloat(k) * XFloat(kLn3);
  r.scale_k_ = k;
  // x = 3^-k; for large k it is far below the double range
  const double x = k > 2000 ? 0.0 : std::pow(3.0, -static_cast<double>(static_cast<long>(k)));
  r.scale_mu_ = x == 0.0 ? 1.0 : neg_log1p_ratio(x);
  r.value_ = 1.0 - x;
  r.log_1mr2_ = -(XFloat(k) * XFloat(kLn3)).to_double() + std::log(2.0 - x);
  if (k < (BigInt(1) << 60)) {
    const auto kk = static_cast<std::uint64_t>(k);
    r.lambda_ = XFloat(r.scale_mu_) / XFloat::pow(XFloat(3.0), kk);
    r.has_lambda_ = true;
  }
  return r;
}

RadiusSpec RadiusSpec::plain(double value) {
  if (!(value >= 0.0 && value < 1.0)) throw std::domain_error("plain radius must lie in [0, 1)");
  RadiusSpec r;
  r.kind_ = Kind::Plain;
  r.plain_ = value;
  r.value_ = value;
  r.log_inv_gap_ = XFloat(-std::log1p(-value));
  r.log_1mr2_ = std::log1p(-value) + std::log1p(value);
  if (value > 0.0) {
    r.lambda_ = XFloat(-std::log(value));
    r.has_lambda_ = true;
    r.set_scale_from_lambda();
  }
  return r;
}

void RadiusSpec::set_scale_from_lambda() {
  const double log_lambda = lambda_.log();
  const double k = std::floor(-log_lambda / kLn3);
  scale_k_ = BigInt(static_cast<long long>(k));
  scale_mu_ = std::exp(log_lambda + k * kLn3);
}

XFloat RadiusSpec::neg_log() const {
  if (!has_lambda_) {
    if (is_zero()) throw std::domain_error("-log(r) is infinite for r = 0");
    throw std::domain_error("-log(r) not representable for " + describe());
  }
  return lambda_;
}

std::string RadiusSpec::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::SqrtComplement: {
      const std::string n = param_.str();
      os << "sqrt(1-1/n), n=" << (n.size() > 24 ? "~" + XFloat(param_).str() : n);
      break;
    }
    case Kind::OneMinusPow3: {
      const std::string k = param_.str();
      os << "1-3^-k, k=" << (k.size() > 24 ? "~" + XFloat(param_).str() : k);
      break;
    }
    case Kind::Plain:
      os.precision(17);
      os << "r=" << plain_;
      break;
  }
  return os.str();
}

bool radius_less(const RadiusSpec& a, const RadiusSpec& b) {
  // larger log(1/(1-r)) means closer to one
  return a.log_inv_gap() < b.log_inv_gap();
}

}  // namespace lacunary
