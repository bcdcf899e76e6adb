#pragma once

#include "lacunary/series.hpp"

#include <string>
#include <vector>

namespace lacunary {

struct NormEstimate {
  enum class Kind { LowerBound, GridEstimate };
  double value = 0.0;
  Kind kind = Kind::LowerBound;
  std::vector<RadiusSpec> radii;
  std::uint64_t n_samples = 0;
  double tail_bound = 0.0;  ///< bound on the seminorm contribution of the dropped tail
};

/// |f(0)| + max over the grid of (1 - r^2)|f'|. A lower bound for the Bloch norm of the
/// truncation; the untruncated norm is at least value - tail_bound.
NormEstimate bloch_norm_lower(const SparseSeries& f, const std::vector<RadiusSpec>& radii, std::uint64_t n,
                              double tail_bound = 0.0);

/// (mean |v|^p)^{1/p} over the samples, accumulated with log-sum-exp.
double lp_mean(const CircleSamples& samples, double p);
double log_lp_mean(const CircleSamples& samples, double p);

/// One analytic inequality lhs <= rhs evaluated numerically.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  ///< rhs - lhs
  bool pass = false;
  std::string grid;     ///< short description of where it was evaluated
};

struct GrowthWitness {
  RadiusSpec radius = RadiusSpec::plain(0.0);
  std::uint64_t sample_index = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct GrowthReport {
  double max_ratio = 0.0;  ///< max |f(z) - f(0)| / bound(z); at most 1 when the inequality holds
  std::uint64_t points = 0;
  bool pass = true;
  std::vector<GrowthWitness> violations;
};

/// |f(z) - f(0)| <= (1/2) norm_upper log((1+|z|)/(1-|z|)) on every sample of every circle.
GrowthReport growth_bound_check(const SparseSeries& f, double norm_upper, const std::vector<RadiusSpec>& circles,
                                std::uint64_t n);

/// (mean |g|^{2n})^{1/2n} <= ||g|| (1 + (n!)^{1/2n} sqrt(log 1/(1-r))).
InequalityReport makarov_moment_check(const SparseSeries& g, double g_norm_upper, const RadiusSpec& r, int n,
                                      std::uint64_t samples, double tolerance = 0.02);

/// mean exp(|g|^2 / (8 log 1/(1-r))) <= 2 for ||g|| <= 1 and r >= 1 - 1/e.
InequalityReport makarov_exp_check(const SparseSeries& g, double g_norm_upper, const RadiusSpec& r,
                                   std::uint64_t samples, double tolerance = 0.02);

struct DecayProfile {
  std::vector<RadiusSpec> radii;
  std::vector<double> seminorm;  ///< (1 - r^2) max |f'| on each circle
  bool monotone_tail = false;    ///< the last tail_length entries decrease
};

DecayProfile little_bloch_profile(const SparseSeries& f, const std::vector<RadiusSpec>& radii, std::uint64_t n,
                                  std::size_t tail_length = 3);

/// (1 - r^2) max_j |f'(r w^j)| on one circle.
double circle_seminorm(const SparseSeries& f, const RadiusSpec& r, std::uint64_t n);

}  // namespace lacunary
