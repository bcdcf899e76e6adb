#include "lacunary/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lacunary {

namespace {

constexpr double kLn3 = 1.09861228866810969140;

double tail_fraction(const CircleSamples& samples, double level) {
  std::uint64_t above = 0;
  for (const auto& v : samples.values)
    if (std::abs(v) > level) ++above;
  return static_cast<double>(above) / static_cast<double>(samples.values.size());
}

}  // namespace

double rayleigh_cdf(double x) { return x <= 0 ? 0.0 : -std::expm1(-0.5 * x * x); }

EmpiricalCDF::EmpiricalCDF(std::vector<double> values) : values_(std::move(values)) {
  std::sort(values_.begin(), values_.end());
}

double EmpiricalCDF::operator()(double x) const {
  if (values_.empty()) return 0.0;
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

CircleSamples block_samples(std::int64_t s, std::uint64_t n, std::uint64_t seed) {
  if (s < 1) throw std::invalid_argument("block index s must be >= 1");
  return eval_circle_random(SparseSeries::pow3_block(s), RadiusSpec::one_minus_pow3(2 * s), n,
                            seed ^ (static_cast<std::uint64_t>(s) * 0x9e3779b97f4a7c15ULL));
}

SzSample sz_empirical_cdf(std::int64_t s, std::uint64_t n, std::uint64_t seed) {
  const auto samples = block_samples(s, n, seed);
  SzSample out;
  out.s = s;
  out.n = n;
  out.c = std::sqrt(0.5 * parseval_sum(SparseSeries::pow3_block(s), RadiusSpec::one_minus_pow3(2 * s)));
  std::vector<double> v(samples.values.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::abs(samples.values[k]) / out.c;
  out.cdf = EmpiricalCDF(std::move(v));
  return out;
}

double sz_distance(std::int64_t s, std::uint64_t n, std::uint64_t seed) {
  return sz_empirical_cdf(s, n, seed).cdf.kolmogorov(rayleigh_cdf);
}

CHat estimate_c(const std::vector<std::int64_t>& s_list, const std::vector<double>& x_grid, std::uint64_t n,
                std::uint64_t seed, double safety) {
  if (s_list.empty()) throw std::invalid_argument("estimate_c needs at least one s");
  CHat out;
  out.s_list = s_list;
  // at least this many samples in the tail before a point enters the fit
  const double min_tail = 200.0 / static_cast<double>(n);
  for (auto s : s_list) {
    const auto samples = block_samples(s, n, seed);
    const double scale = std::sqrt(RadiusSpec::one_minus_pow3(2 * s).log_inv_gap().to_double());
    double best = 0.0;
    for (double x : x_grid) {
      if (!(x > 0)) continue;
      CFitPoint p{s, x, tail_fraction(samples, x * scale), 0.0, false};
      if (p.tail >= min_tail) {
        p.c_point = -std::log(p.tail) / (x * x);
        p.used = true;
        best = std::max(best, p.c_point);
      }
      out.points.push_back(p);
    }
    out.per_s.push_back(best);
  }
  const auto [lo, hi] = std::minmax_element(out.per_s.begin(), out.per_s.end());
  out.value = safety * *hi;
  out.spread = *lo > 0 ? *hi / *lo - 1.0 : std::numeric_limits<double>::infinity();
  out.stable = out.spread <= 0.2;
  const double window_lo = 2.0 * kLn3, window_hi = 2.0 * std::exp(2.0) * kLn3;
  out.in_window = *hi >= window_lo * (1 - 1e-3) && out.value <= window_hi * safety;
  if (!out.in_window)
    throw std::runtime_error("fitted c = " + std::to_string(out.value) + " lies outside the sanity window [" +
                             std::to_string(window_lo) + ", " + std::to_string(window_hi) + "]");
  return out;
}

Lemma35Report lemma35_check(std::int64_t s) {
  if (s < 1) throw std::invalid_argument("block index s must be >= 1");
  Lemma35Report rep;
  rep.s = s;
  const auto r = RadiusSpec::one_minus_pow3(2 * s);
  rep.parseval = pow3_block_power_sum(s, r, 2.0).to_double();
  rep.ratio = rep.parseval / static_cast<double>(s);
  rep.lower = std::exp(-2.0) * 0.95;
  rep.upper = static_cast<double>(s + 1) / static_cast<double>(s);
  rep.min_term = std::exp(2.0 * radial_power(BigExponent::pow3(2 * s), r));
  rep.pass = rep.ratio >= rep.lower && rep.ratio <= rep.upper;
  return rep;
}

Lemma36Report lemma36_check(std::int64_t s, const std::vector<double>& x_grid, double eps, double c_hat,
                            std::uint64_t n, std::uint64_t seed) {
  Lemma36Report rep;
  rep.s = s;
  rep.c_hat = c_hat;
  rep.eps = eps;
  const auto samples = block_samples(s, n, seed);
  const double scale = std::sqrt(RadiusSpec::one_minus_pow3(2 * s).log_inv_gap().to_double());
  for (double x : x_grid) {
    Lemma36Point p;
    p.x = x;
    p.tail = tail_fraction(samples, x * scale);
    p.bound = std::exp(-c_hat * x * x) - eps;
    p.pass = p.tail >= p.bound;
    rep.pass = rep.pass && p.pass;
    rep.points.push_back(p);
  }
  return rep;
}

}  // namespace lacunary
