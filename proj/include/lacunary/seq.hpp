#pragma once

#include "lacunary/series.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lacunary {

// ---------------------------------------------------------------- exponent table

struct ExponentEntry {
  int n = 0;
  int i = 0;
  BigInt s;
  BigInt first_candidate;  ///< value before any doubling
  int retries = 0;         ///< doublings needed for the damping condition
};

/// Triangular array s(n, i), 1 <= i <= min(n, columns), stored in construction order.
struct ExponentTable {
  int n_max = 0;
  int columns = 0;
  BigInt seed_start;
  std::vector<ExponentEntry> entries;

  int width(int n) const { return std::min(n, columns); }
  const ExponentEntry& entry(int n, int i) const;
  const BigInt& s(int n, int i) const { return entry(n, i).s; }
  bool contains(int n, int i) const { return n >= 1 && n <= n_max && i >= 1 && i <= width(n); }
  /// s(n, 1) for the single-sequence use.
  const BigInt& column1(int n) const { return s(n, 1); }
};

/// Greedy construction: each entry starts at max(2 s(n-1,i), previous + 1, seed_start) and is
/// doubled until U_{s(n,i)}(r_{s(n',i')}) < 2^{-(n+n')} holds against all predecessors in both
/// directions. columns limits the triangle width (columns = n_max gives the full triangle).
ExponentTable build_lemma21(int n_max, const BigInt& seed_start = 2, int columns = -1);

struct LemmaViolation {
  char condition = '?';  ///< '1', '2' or '3'
  int n = 0, i = 0, n2 = 0, i2 = 0;
  double value = 0.0;    ///< ratio for (ii), log U minus log bound for (iii)
};

struct Lemma21Report {
  bool pass = true;
  std::uint64_t checks_i = 0, checks_ii = 0, checks_iii = 0;
  double worst_iii_log_margin = 0.0;  ///< min over pairs of log bound - log U (positive when all pass)
  std::vector<LemmaViolation> violations;
};

/// Exhaustive check of (i), (ii), (iii); independent of the builder's evaluation path.
Lemma21Report verify_lemma21(const ExponentTable& t);

// ---------------------------------------------------------------- binary branches

struct AlphaBranch {
  double alpha = 0.0;
  int depth = 0;
};

/// Binary digits of alpha (terminating expansion for dyadic values, alpha = 1 is 0.111...).
std::vector<int> alpha_digits(const AlphaBranch& b);
/// { 2^k + value(first k digits) : 1 <= k <= depth }, increasing.
std::vector<BigInt> alpha_set(const AlphaBranch& b);
/// Index of the first differing digit (1-based), or depth + 1 when the prefixes agree.
int divergence_depth(const AlphaBranch& a, const AlphaBranch& b);
/// N_{a0} minus the union of the other sets.
std::vector<BigInt> alpha_residual(const AlphaBranch& a0, const std::vector<AlphaBranch>& others);

// ---------------------------------------------------------------- block table

enum class ConstantProfile { Literal, Relaxed };
std::string profile_name(ConstantProfile p);
ConstantProfile parse_profile(const std::string& s);

/// 2^9 sqrt(c / j)
double delta_coeff(int j, double c_hat);

struct MeasureCertificate {
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;  ///< samples inside E_{i,j}
  double measure = 0.0;    ///< hits / samples
  double lower = 0.0;      ///< measure - 3 sigma
  double target = 0.0;     ///< 1 - 2^{-(j+5)}
  bool evaluated = false;  ///< false when the block is beyond the sampling budget
  bool pass = false;
};

struct BlockEntry {
  int i = 0;
  int j = 0;
  BigInt s;
  BigInt first_candidate;
  int retries = 0;
  MeasureCertificate measure;
  double limit_measure = 0.0;  ///< Rayleigh-limit prediction, recorded for every block
};

struct BlockTable {
  int j_max = 0;
  ConstantProfile profile = ConstantProfile::Relaxed;
  double c_hat = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t mc_samples = 0;
  std::uint64_t mc_work_budget = 0;
  std::vector<BlockEntry> entries;  ///< j ascending, then i = 1..j

  const BlockEntry& entry(int i, int j) const;
  bool contains(int i, int j) const { return j >= 1 && j <= j_max && i >= 1 && i <= j; }
  RadiusSpec radius(int i, int j) const { return RadiusSpec::one_minus_pow3(2 * entry(i, j).s); }
  double delta(int j) const { return delta_coeff(j, c_hat); }
};

struct Prop37Options {
  std::uint64_t mc_samples = 1 << 17;
  std::uint64_t seed = 1;
  /// samples * (s + 1) above this leaves the measure condition unevaluated
  std::uint64_t mc_work_budget = std::uint64_t{1} << 30;
  int max_retries = 64;
};

/// s(i,j) floor for (1.i.j): 2^{4j+4} literally, 4j+4 when relaxed.
BigInt block_floor(int j, ConstantProfile p);

BlockTable build_prop37(int j_max, ConstantProfile profile, double c_hat, const Prop37Options& opt = {});

/// Left side X_{i,j}(r) = sum_{m=s}^{2s} r^{3^m} / sqrt(log 1/(1-r)).
XFloat block_xfunc(int i, int j, const BlockTable& t, const RadiusSpec& r);
XFloat block_xfunc(const BigInt& s, const RadiusSpec& r);

/// Right side of (2.i.j): (1/delta_j) 2^{-(i+i'+j+2j'+2)}.
XFloat prop37_damping_bound(int i, int j, int i2, int j2, double c_hat);

/// E_{i,j} threshold sqrt(1/(c 2^{j+6})) sqrt(log 1/(1-r(i,j))) for a block parameter s.
double block_threshold(const BigInt& s, int j, double c_hat);

/// Monte Carlo estimate of m(E) for the block with parameter s, using exact ternary digits:
/// the values zeta^{3^m}, m = s..2s, for uniform zeta have the law of e^{2 pi i 3^k psi}.
MeasureCertificate block_measure(const BigInt& s, int j, double c_hat, std::uint64_t samples, std::uint64_t seed,
                                 std::uint64_t work_budget);

/// m(E_{i,j}) predicted by the Rayleigh limit law with the exact Parseval normalization.
/// Informational only: it is what the sampled measure tends to for large s.
double block_measure_limit(const BigInt& s, int j, double c_hat);

struct Prop37Violation {
  std::string condition;
  int i = 0, j = 0, i2 = 0, j2 = 0;
  double value = 0.0;
};

struct Prop37Report {
  bool pass = true;            ///< all three conditions hold (measure certified for every block)
  bool deterministic_pass = true;  ///< (1.i.j) and (2.i.j)
  int measure_certified = 0;
  int measure_uncertified = 0;
  int measure_failed = 0;
  bool radii_increasing = true;
  std::vector<Prop37Violation> violations;
};

Prop37Report verify_prop37(const BlockTable& t);

/// Stream seed for the block (i, j).
std::uint64_t block_stream_seed(std::uint64_t seed, int i, int j);

}  // namespace lacunary
