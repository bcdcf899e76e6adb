#include "lacunary/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lacunary {

double circle_seminorm(const SparseSeries& f, const RadiusSpec& r, std::uint64_t n) {
  const auto d = eval_derivative_circle(f, r, n, r.log_one_minus_r_squared());
  double best = 0.0;
  for (const auto& v : d.values) best = std::max(best, std::abs(v));
  return best;
}

NormEstimate bloch_norm_lower(const SparseSeries& f, const std::vector<RadiusSpec>& radii, std::uint64_t n,
                              double tail_bound) {
  if (radii.empty()) throw std::invalid_argument("bloch_norm_lower needs at least one radius");
  NormEstimate est;
  est.radii = radii;
  est.n_samples = n;
  est.tail_bound = tail_bound;
  double semi = 0.0;
  for (const auto& r : radii) semi = std::max(semi, circle_seminorm(f, r, n));
  est.value = std::abs(f.constant()) + semi;
  return est;
}

double log_lp_mean(const CircleSamples& samples, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_mean needs p >= 1");
  if (samples.values.empty()) throw std::invalid_argument("lp_mean needs samples");
  double top = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(samples.values.size());
  for (std::size_t j = 0; j < logs.size(); ++j) {
    logs[j] = p * std::log(std::abs(samples.values[j]));
    top = std::max(top, logs[j]);
  }
  if (top == -std::numeric_limits<double>::infinity()) return top;
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - top);
  return (top + std::log(acc / static_cast<double>(logs.size()))) / p;
}

double lp_mean(const CircleSamples& samples, double p) { return std::exp(log_lp_mean(samples, p)); }

GrowthReport growth_bound_check(const SparseSeries& f, double norm_upper, const std::vector<RadiusSpec>& circles,
                                std::uint64_t n) {
  GrowthReport rep;
  for (const auto& r : circles) {
    // log((1+r)/(1-r)) from the symbolic radius
    const double log_ratio = r.log_inv_gap().to_double() + std::log1p(r.value());
    const double rhs = 0.5 * norm_upper * log_ratio;
    const auto s = eval_circle(f, r, n);
    for (std::uint64_t j = 0; j < n; ++j) {
      const double lhs = std::abs(s.values[j] - f.constant());
      ++rep.points;
      if (lhs == 0.0) continue;
      const double ratio = rhs > 0 ? lhs / rhs : std::numeric_limits<double>::infinity();
      rep.max_ratio = std::max(rep.max_ratio, ratio);
      // rounding allowance of a few ulps of the evaluated terms
      if (lhs > rhs * (1 + 1e-12) + 1e-14) {
        rep.pass = false;
        rep.violations.push_back({r, j, lhs, rhs});
      }
    }
  }
  return rep;
}

InequalityReport makarov_moment_check(const SparseSeries& g, double g_norm_upper, const RadiusSpec& r, int n,
                                      std::uint64_t samples, double tolerance) {
  if (n < 1) throw std::invalid_argument("moment order n must be >= 1");
  InequalityReport rep;
  rep.name = "makarov_moment";
  rep.lhs = lp_mean(eval_circle(g, r, samples), 2.0 * n);
  const double nfact_root = std::exp(std::lgamma(n + 1.0) / (2.0 * n));
  rep.rhs = g_norm_upper * (1.0 + nfact_root * std::sqrt(r.log_inv_gap().to_double()));
  rep.margin = rep.rhs - rep.lhs;
  rep.pass = rep.lhs <= rep.rhs * (1.0 + tolerance);
  std::ostringstream os;
  os << "r=" << r.describe() << " n=" << n << " N=" << samples;
  rep.grid = os.str();
  return rep;
}

InequalityReport makarov_exp_check(const SparseSeries& g, double g_norm_upper, const RadiusSpec& r,
                                   std::uint64_t samples, double tolerance) {
  const double big_l = r.log_inv_gap().to_double();
  if (big_l < 1.0) throw std::domain_error("exponential form needs r >= 1 - 1/e");
  if (g_norm_upper > 1.0) throw std::domain_error("exponential form needs norm upper bound <= 1");
  InequalityReport rep;
  rep.name = "makarov_exp";
  const auto s = eval_circle(g, r, samples);
  std::vector<double> expo(s.values.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < expo.size(); ++j) {
    expo[j] = std::norm(s.values[j]) / (8.0 * big_l);
    top = std::max(top, expo[j]);
  }
  double acc = 0.0;
  for (double e : expo) acc += std::exp(e - top);
  rep.lhs = std::exp(top + std::log(acc / static_cast<double>(expo.size())));
  rep.rhs = 2.0;
  rep.margin = rep.rhs - rep.lhs;
  rep.pass = rep.lhs <= rep.rhs * (1.0 + tolerance);
  rep.grid = "r=" + r.describe() + " N=" + std::to_string(samples);
  return rep;
}

DecayProfile little_bloch_profile(const SparseSeries& f, const std::vector<RadiusSpec>& radii, std::uint64_t n,
                                  std::size_t tail_length) {
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (!radius_less(radii[k - 1], radii[k])) throw std::invalid_argument("profile radii must increase");
  DecayProfile prof;
  prof.radii = radii;
  for (const auto& r : radii) prof.seminorm.push_back(circle_seminorm(f, r, n));
  const std::size_t len = std::min(tail_length, prof.seminorm.size());
  prof.monotone_tail = len >= 2;
  for (std::size_t k = prof.seminorm.size() - len + 1; k < prof.seminorm.size() && len >= 2; ++k)
    if (!(prof.seminorm[k] < prof.seminorm[k - 1])) prof.monotone_tail = false;
  return prof;
}

}  // namespace lacunary
