#include "lacunary/series.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lacunary {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<Complex> roots_of_unity(std::uint64_t n) {
  std::vector<Complex> w(n);
  for (std::uint64_t t = 0; t < n; ++t) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n);
    w[t] = Complex(std::cos(angle), std::sin(angle));
  }
  return w;
}

struct PreparedTerm {
  Complex amplitude;  // coefficient times radial factor, already materialized
  std::uint64_t residue;
};

CircleSamples accumulate(const RadiusSpec& r, std::uint64_t n, double log_weight, Complex constant,
                         const std::vector<PreparedTerm>& terms) {
  if (n == 0) throw std::invalid_argument("circle sampling needs N >= 1");
  CircleSamples out{r, n, log_weight, std::vector<Complex>(n, constant * std::exp(log_weight))};
  const auto w = roots_of_unity(n);
  for (const auto& t : terms) {
    if (t.amplitude == Complex{}) continue;
    std::uint64_t idx = 0;
    for (std::uint64_t j = 0; j < n; ++j) {
      out.values[j] += t.amplitude * w[idx];
      idx += t.residue;
      if (idx >= n) idx -= n;
    }
  }
  return out;
}

Complex materialize(Complex coeff, double log_scale) {
  if (log_scale == kNegInf) return {};
  const double mag = std::abs(coeff);
  return std::polar(std::exp(std::log(mag) + log_scale), std::arg(coeff));
}

// 1 - r = 3^-k style closed form: log r^{3^m} = -mu 3^{m-K}
double pow3_closed_form(std::int64_t m, const RadiusSpec& r) {
  const BigInt d = BigInt(m) - r.pow3_scale();
  if (d > 700) return kNegInf;
  if (d < -800) return -0.0;
  return -r.pow3_mantissa() * std::pow(3.0, static_cast<double>(static_cast<long>(d)));
}

}  // namespace

BigExponent::BigExponent(BigInt v) : value_(std::move(v)) {
  if (value_ < 0) throw std::invalid_argument("exponent must be nonnegative");
}

BigExponent BigExponent::pow3(std::int64_t m) {
  if (m < 0) throw std::invalid_argument("pow3 index must be nonnegative");
  BigExponent e;
  e.value_ = boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(m));
  e.pow3_ = m;
  return e;
}

std::uint64_t BigExponent::mod(std::uint64_t n) const {
  if (pow3_) return pow3_mod(static_cast<std::uint64_t>(*pow3_), n);
  return mod_small(value_, n);
}

std::uint64_t BigExponent::low64() const {
  if (pow3_) {
    std::uint64_t acc = 1, base = 3;
    for (auto m = static_cast<std::uint64_t>(*pow3_); m; m >>= 1) {
      if (m & 1) acc *= base;
      base *= base;
    }
    return acc;
  }
  return static_cast<std::uint64_t>(BigInt(value_ & BigInt(~std::uint64_t{0})));
}

SparseSeries::SparseSeries(Complex constant, std::vector<SeriesTerm> terms) : constant_(constant) {
  terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (t.exponent.is_zero())
      throw std::invalid_argument("exponent 0 belongs in the constant term");
    if (!terms_.empty() && !(terms_.back().exponent < t.exponent))
      throw std::invalid_argument("series exponents must be strictly increasing");
    if (t.coeff == Complex{}) continue;
    terms_.push_back(std::move(t));
  }
}

SparseSeries SparseSeries::monomial(Complex coeff, BigExponent e) {
  if (e.is_zero()) return SparseSeries(coeff);
  return SparseSeries(0.0, {{coeff, std::move(e)}});
}

SparseSeries SparseSeries::pow3_block(std::int64_t s, Complex coeff) {
  if (s < 1) throw std::invalid_argument("block index s must be >= 1");
  std::vector<SeriesTerm> terms;
  terms.reserve(static_cast<std::size_t>(s + 1));
  for (std::int64_t m = s; m <= 2 * s; ++m) terms.push_back({coeff, BigExponent::pow3(m)});
  return SparseSeries(0.0, std::move(terms));
}

SparseSeries SparseSeries::plus(const SparseSeries& other) const {
  std::vector<SeriesTerm> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->exponent < b->exponent)) {
      merged.push_back(*a++);
    } else if (a == terms_.end() || b->exponent < a->exponent) {
      merged.push_back(*b++);
    } else {
      SeriesTerm t = *a++;
      t.coeff += (b++)->coeff;
      merged.push_back(std::move(t));
    }
  }
  return SparseSeries(constant_ + other.constant_, std::move(merged));
}

SparseSeries SparseSeries::scaled(Complex factor) const {
  std::vector<SeriesTerm> terms = terms_;
  for (auto& t : terms) t.coeff *= factor;
  return SparseSeries(constant_ * factor, std::move(terms));
}

LacunaryMembership lacunary_membership(const SparseSeries& f) {
  LacunaryMembership m;
  const auto& terms = f.terms();
  m.min_gap_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < terms.size(); ++k) {
    const double ratio = (XFloat(terms[k].exponent.value()) / XFloat(terms[k - 1].exponent.value())).to_double();
    m.min_gap_ratio = std::min(m.min_gap_ratio, ratio);
  }
  m.lacunary = m.min_gap_ratio >= 1.5;
  const std::size_t quarter = std::max<std::size_t>(1, terms.size() / 4);
  double head = 0.0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const double a = std::abs(terms[k].coeff);
    m.sup_coeff = std::max(m.sup_coeff, a);
    if (k < quarter) head = std::max(head, a);
    if (k + quarter >= terms.size()) m.tail_coeff = std::max(m.tail_coeff, a);
  }
  m.bloch = std::isfinite(m.sup_coeff);
  m.little_bloch = terms.size() >= 4 ? m.tail_coeff <= 0.5 * head : terms.empty();
  return m;
}

DensePolynomial::DensePolynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == Complex{}) coeffs_.pop_back();
}

Complex DensePolynomial::operator()(Complex z) const {
  Complex acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

DensePolynomial DensePolynomial::derivative() const {
  std::vector<Complex> d;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d.push_back(static_cast<double>(k) * coeffs_[k]);
  return DensePolynomial(std::move(d));
}

DensePolynomial DensePolynomial::scaled(Complex factor) const {
  std::vector<Complex> c = coeffs_;
  for (auto& x : c) x *= factor;
  return DensePolynomial(std::move(c));
}

double DensePolynomial::sup_bound(double r) const {
  double acc = 0.0;
  double rk = 1.0;
  for (const auto& c : coeffs_) {
    acc += std::abs(c) * rk;
    rk *= r;
  }
  return acc;
}

double DensePolynomial::l2_mean(double r) const {
  double acc = 0.0;
  double rk = 1.0;
  for (const auto& c : coeffs_) {
    acc += std::norm(c) * rk * rk;
    rk *= r;
  }
  return std::sqrt(acc);
}

double radial_power(const BigExponent& e, const RadiusSpec& r) {
  if (e.is_zero()) return 0.0;
  if (r.is_zero()) return kNegInf;
  if (e.pow3_index() && (r.kind() == RadiusSpec::Kind::OneMinusPow3 || !r.has_neg_log()))
    return pow3_closed_form(*e.pow3_index(), r);
  const double v = -(XFloat(e.value()) * r.neg_log()).to_double();
  return std::isfinite(v) ? v : kNegInf;
}

CircleSamples eval_circle(const SparseSeries& f, const RadiusSpec& r, std::uint64_t n,
                          double log_weight) {
  std::vector<PreparedTerm> prepared;
  prepared.reserve(f.terms().size());
  for (const auto& t : f.terms())
    prepared.push_back({materialize(t.coeff, radial_power(t.exponent, r) + log_weight),
                        n == 0 ? 0 : t.exponent.mod(n)});
  return accumulate(r, n, log_weight, f.constant(), prepared);
}

CircleSamples eval_derivative_circle(const SparseSeries& f, const RadiusSpec& r, std::uint64_t n,
                                     double log_weight) {
  std::vector<PreparedTerm> prepared;
  prepared.reserve(f.terms().size());
  for (const auto& t : f.terms()) {
    const BigInt& e = t.exponent.value();
    double log_radial = 0.0;
    if (e != 1) {
      if (r.is_zero()) {
        log_radial = kNegInf;
      } else if (t.exponent.pow3_index()) {
        // r^{e-1} = r^e / r, keeping the closed form for 3^m exponents
        log_radial = radial_power(t.exponent, r) + (r.has_neg_log() ? r.neg_log().to_double() : 0.0);
      } else {
        log_radial = radial_power(BigExponent(BigInt(e - 1)), r);
      }
    }
    const double log_scale = log_big(e) + log_radial + log_weight;
    prepared.push_back({materialize(t.coeff, log_scale), n == 0 ? 0 : mod_small(BigInt(e - 1), n)});
  }
  return accumulate(r, n, log_weight, 0.0, prepared);
}

std::vector<std::uint64_t> random_circle_points(std::uint64_t n, std::uint64_t seed) {
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("random circle sampling needs N a power of two");
  const int shift = 64 - std::countr_zero(n);
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> u(n);
  for (std::uint64_t j = 0; j < n; ++j) {
    const std::uint64_t jitter = shift == 64 ? rng() : rng() >> (64 - shift);
    u[j] = (shift == 64 ? 0 : j << shift) + jitter;
  }
  return u;
}

CircleSamples eval_circle_random(const SparseSeries& f, const RadiusSpec& r, std::uint64_t n, std::uint64_t seed) {
  const auto u = random_circle_points(n, seed);
  CircleSamples out{r, n, 0.0, std::vector<Complex>(n, f.constant())};
  constexpr double kTurn = 2.0 * std::numbers::pi / 18446744073709551616.0;
  for (const auto& t : f.terms()) {
    const Complex a = materialize(t.coeff, radial_power(t.exponent, r));
    if (a == Complex{}) continue;
    const std::uint64_t e = t.exponent.low64();
    for (std::uint64_t j = 0; j < n; ++j) {
      const double angle = static_cast<double>(e * u[j]) * kTurn;
      out.values[j] += a * Complex(std::cos(angle), std::sin(angle));
    }
  }
  return out;
}

CircleSamples eval_polynomial_circle(const DensePolynomial& p, const RadiusSpec& r, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("circle sampling needs N >= 1");
  CircleSamples out{r, n, 0.0, std::vector<Complex>(n)};
  const double rv = r.value();
  for (std::uint64_t j = 0; j < n; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    out.values[j] = p(std::polar(rv, angle));
  }
  return out;
}

double log_u_func(const BigExponent& n, const RadiusSpec& r) {
  if (n.is_zero()) throw std::invalid_argument("U_n needs n >= 1");
  const double rp = n.value() == 1 ? 0.0 : radial_power(BigExponent(BigInt(n.value() - 1)), r);
  return r.log_one_minus_r_squared() + log_big(n.value()) + rp;
}

double u_func(const BigExponent& n, const RadiusSpec& r) { return std::exp(log_u_func(n, r)); }

double u_max(const BigExponent& n) {
  if (n.is_zero()) throw std::invalid_argument("U_n needs n >= 1");
  if (n.value() == 1) return 1.0;
  // maximizer r^2 = (n-1)/(n+1): U = 2n/(n+1) * ((n-1)/(n+1))^{(n-1)/2}
  const XFloat nx(n.value());
  const double y = (XFloat(2.0) / (nx + XFloat(1.0))).to_double();  // 2/(n+1)
  double log_power;
  if (y > 1e-8) {
    const double nd = nx.to_double();
    log_power = 0.5 * (nd - 1.0) * std::log1p(-y);
  } else {
    // (n-1)/2 * log(1-y) = -(1-y)(1 + y/2 + y^2/3) to second order
    log_power = -(1.0 - y) * (1.0 + y / 2.0 + y * y / 3.0);
  }
  const double log_ratio = y > 1e-8 ? std::log1p(-y / 2.0) : -y / 2.0;  // log(n/(n+1))
  return std::exp(std::log(2.0) + log_ratio + log_power);
}

RadiusSpec r_opt(const BigExponent& n) {
  if (n.is_zero()) throw std::domain_error("r_opt needs n >= 1");
  if (n.value() == 1) throw std::domain_error("r_opt(1) = 0 is degenerate for circle sampling");
  return RadiusSpec::sqrt_complement(n.value());
}

double parseval_sum(const SparseSeries& f, const RadiusSpec& r) {
  double acc = std::norm(f.constant());
  for (const auto& t : f.terms()) {
    const double lp = radial_power(t.exponent, r);
    if (lp == kNegInf) continue;
    acc += std::norm(t.coeff) * std::exp(2.0 * lp);
  }
  return acc;
}

XFloat pow3_block_power_sum(const BigInt& s, const RadiusSpec& r, double weight) {
  if (s < 1) throw std::invalid_argument("block index s must be >= 1");
  if (r.is_zero()) return XFloat();
  const BigInt lo = s;
  const BigInt hi = 2 * s;
  const BigInt& k = r.pow3_scale();
  const double mu = r.pow3_mantissa();
  // terms with m <= K - 61 equal one to within 3^-61
  const BigInt bulk_end = std::min(hi, BigInt(k - 61));
  XFloat total;
  if (bulk_end >= lo) total = XFloat(BigInt(bulk_end - lo + 1));
  const BigInt start = std::max(lo, BigInt(k - 60));
  const BigInt stop = std::min(hi, BigInt(k + 8));
  double explicit_sum = 0.0;
  for (BigInt m = start; m <= stop; ++m) {
    const auto d = static_cast<long>(BigInt(m - k));
    explicit_sum += std::exp(-weight * mu * std::pow(3.0, static_cast<double>(d)));
  }
  return total + XFloat(explicit_sum);
}

double bloch_norm_upper(const SparseSeries& f) {
  double acc = std::abs(f.constant());
  for (const auto& t : f.terms()) acc += std::abs(t.coeff) * u_max(t.exponent);
  return acc;
}

}  // namespace lacunary
