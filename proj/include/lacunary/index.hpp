#pragma once

#include "lacunary/seq.hpp"
#include "lacunary/series.hpp"

#include <random>
#include <string>
#include <vector>

namespace lacunary {

/// Truncated generating functions together with the table rows behind every term.
struct GeneratorFamily {
  std::string source;                   ///< "thm13" or "thm14"
  std::vector<std::string> labels;
  std::vector<SparseSeries> functions;
  std::vector<std::vector<int>> rows;   ///< table row n of each term
  int n_trunc = 0;                      ///< rows beyond this are dropped

  /// Upper bound for the dropped part sum r^{s} of function k at radius r.
  double tail(std::size_t k, const RadiusSpec& r) const;
};

/// f_i = 1 + sum_{n=i}^{n_trunc} z^{s(n,i)} for each i in i_set.
GeneratorFamily thm13_functions(const ExponentTable& t, const std::vector<int>& i_set, int n_trunc);

/// f_alpha = 1 + sum_{n in N_alpha} z^{s_n}, s_n = s(n,1), with branch codes up to the table depth.
GeneratorFamily thm14_functions(const std::vector<AlphaBranch>& alphas, const ExponentTable& t);

/// Upper bound for sum_{n > n_trunc} r^{s(n,i)} using s(n+1,i) >= 2 s(n,i).
double truncation_tail(const BigInt& last_exponent, const RadiusSpec& r);

struct SeparationReport {
  BigExponent block;          ///< s(n, i0): the circle is r = (1 - 1/s)^{1/2}
  int block_row = 0;
  std::uint64_t n_samples = 0;
  double lhs = 0.0;           ///< max over the samples of (1 - r^2) |(sum p_k f_k)'|
  double main_term = 0.0;     ///< U_s(r) max |p_0|
  double cross_own = 0.0;     ///< ||p_0|| sum_{k != n} U_{s_k}(r)
  double poly_own = 0.0;      ///< ||p_0'|| (1 - r^2) sup |f_{i0}|
  double cross_other = 0.0;   ///< sum_j ||p_j|| sum_k U_{s(k,i_j)}(r)
  double poly_other = 0.0;    ///< sum_j ||p_j'|| (1 - r^2) sup |f_{i_j}|
  double rounding = 0.0;
  double error_budget = 0.0;  ///< sum of the five terms above
  double dyadic_budget = 0.0;  ///< the same with the 2^{-(k+n)} bounds in place of the actual U sums
  double tail_budget = 0.0;   ///< extra allowance for the terms dropped by truncation
  double p0_at_zero = 0.0;
  double ratio = 0.0;         ///< lhs / |p_0(0)|
  bool vacuous = false;       ///< p_0(0) = 0
  bool consistent = false;    ///< lhs >= main_term - error_budget
};

/// Lower bound for ||sum_k p_k f_{members[k]}||_B on the circle belonging to the term s_block of
/// f_{members[0]}, following the five-term decomposition of the separation argument.
SeparationReport separation_lower_bound(const GeneratorFamily& fam, const std::vector<std::size_t>& members,
                                        const std::vector<DensePolynomial>& p, const BigExponent& s_block,
                                        std::uint64_t n);

/// Random polynomial with coefficients uniform on the unit disc.
DensePolynomial random_polynomial(std::mt19937_64& rng, int degree);
/// p / p(0) so that the value at the origin is one.
DensePolynomial normalize_at_zero(const DensePolynomial& p);

/// sup_r (1-r^2) sum_m 3^m r^{3^m - 1} over any set of exponents 3^m: 2 e^{1/2} sup_y sum_mu h(3^mu y)
/// with h(y) = y e^{-y}, plus a margin for the grid search.
double pow3_seminorm_constant();

/// Coefficient-based upper bound for ||sum_m p_m f_{i_m}||_B with f_i = 1 + sum_{j>=i} delta_j f_{i,j}.
/// Valid for the untruncated functions.
double little_bloch_norm_upper(const BlockTable& t, const std::vector<int>& i_set,
                               const std::vector<DensePolynomial>& p);

/// Empirical measure of U_{i,j} = {zeta in E_{i,j} : |p(r(i,j) zeta)| >= 2^{j-1}}.
/// Exactly zero without sampling the block when sum |c_k| < 2^{j-1}; otherwise the block is sampled
/// at random points, which needs (s(i,j) + 1) * N within the work budget.
double u_set_measure(const BlockTable& t, const DensePolynomial& p, int i, int j, std::uint64_t n,
                     std::uint64_t seed = 1, std::uint64_t work_budget = std::uint64_t{1} << 30);

struct BootstrapLink {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
  bool evaluated = true;
};

struct BootstrapMember {
  int i = 0;
  double u_at_j = 0.0;         ///< m(U_{i,J})          <= J / 2^{J+5}
  double lp_next = 0.0;        ///< ||p||_{2^{J+1}} on r(i,J+1) <= 2^{J+1}
  double measure_a = 0.0;      ///< m(A) <= 1/16
  double lp_j = 0.0;           ///< ||p||_{2^J} on r(i,J) <= 2^J
  double split_rhs = 0.0;      ///< Minkowski + Cauchy-Schwarz bound for lp_j
  double x_value = 0.0;        ///< X <= 2
  double x_squared = 0.0;      ///< <= 32
  double exp_mean = 0.0;       ///< exp(int |F|^2 / (8 L)) over the table's blocks, exact by Parseval
  double u_at_j_minus = 0.0;   ///< m(U_{i,J-1}) <= (J-1)/2^{J+4}
  std::vector<BootstrapLink> links;
};

struct BootstrapReport {
  int j_level = 0;
  std::string profile;
  double c_hat = 0.0;
  double norm_upper = 0.0;
  std::vector<BootstrapMember> members;
  double chain_measure_bound = 0.0;  ///< J/2^{J+5} + 1/2^{J+5}
  bool hypotheses_hold = true;
  bool pass = true;
  std::string failed_link;
};

/// One step of the L^{2^J} / measure bootstrap for the little-Bloch family at level J.
BootstrapReport bootstrap_step_check(const BlockTable& t, const std::vector<int>& i_set,
                                     const std::vector<DensePolynomial>& p, int j_level, std::uint64_t n,
                                     std::uint64_t seed = 1);

}  // namespace lacunary
