#include "lacunary/index.hpp"

#include "lacunary/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lacunary {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double exp_or_zero(double log_value) { return log_value == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(log_value); }

/// 1 + sum_k r^{e_k}: bound for sup |f| on the circle of radius r.
double abs_sum(const SparseSeries& f, const RadiusSpec& r) {
  double acc = std::abs(f.constant());
  for (const auto& t : f.terms()) acc += std::abs(t.coeff) * exp_or_zero(radial_power(t.exponent, r));
  return acc;
}

}  // namespace

double truncation_tail(const BigInt& last_exponent, const RadiusSpec& r) {
  if (last_exponent <= 0) throw std::invalid_argument("tail needs a positive last exponent");
  double acc = 0.0;
  BigInt e = last_exponent;
  for (int k = 1; k < 1 << 20; ++k) {
    e <<= 1;
    const double term = exp_or_zero(radial_power(BigExponent(e), r));
    acc += term;
    // terms square from here on
    if (term < 1e-300 || (term < 0.5 && term * term / (1.0 - term * term) < 1e-17 * acc)) break;
  }
  return acc;
}

double GeneratorFamily::tail(std::size_t k, const RadiusSpec& r) const {
  const auto& terms = functions.at(k).terms();
  if (terms.empty()) return 0.0;
  return truncation_tail(terms.back().exponent.value(), r);
}

GeneratorFamily thm13_functions(const ExponentTable& t, const std::vector<int>& i_set, int n_trunc) {
  if (n_trunc < 1 || n_trunc > t.n_max) throw std::invalid_argument("truncation row outside the table");
  GeneratorFamily fam;
  fam.source = "thm13";
  fam.n_trunc = n_trunc;
  for (int i : i_set) {
    if (i < 1 || i > t.columns) throw std::invalid_argument("column " + std::to_string(i) + " not in the table");
    std::vector<SeriesTerm> terms;
    std::vector<int> rows;
    for (int n = i; n <= n_trunc; ++n) {
      terms.push_back({1.0, BigExponent(t.s(n, i))});
      rows.push_back(n);
    }
    fam.functions.emplace_back(1.0, std::move(terms));
    fam.rows.push_back(std::move(rows));
    fam.labels.push_back("f_" + std::to_string(i));
  }
  return fam;
}

GeneratorFamily thm14_functions(const std::vector<AlphaBranch>& alphas, const ExponentTable& t) {
  GeneratorFamily fam;
  fam.source = "thm14";
  fam.n_trunc = t.n_max;
  for (std::size_t a = 0; a < alphas.size(); ++a)
    for (std::size_t b = 0; b < a; ++b)
      if (alphas[a].alpha == alphas[b].alpha) throw std::invalid_argument("alphas must be distinct");
  for (const auto& al : alphas) {
    std::vector<SeriesTerm> terms;
    std::vector<int> rows;
    for (const auto& code : alpha_set(al)) {
      if (code > t.n_max) throw std::invalid_argument("branch depth " + std::to_string(al.depth) +
                                                      " needs rows beyond the table (" + std::to_string(t.n_max) + ")");
      const int n = static_cast<int>(code);
      terms.push_back({1.0, BigExponent(t.column1(n))});
      rows.push_back(n);
    }
    fam.functions.emplace_back(1.0, std::move(terms));
    fam.rows.push_back(std::move(rows));
    fam.labels.push_back("f_alpha=" + std::to_string(al.alpha));
  }
  return fam;
}

SeparationReport separation_lower_bound(const GeneratorFamily& fam, const std::vector<std::size_t>& members,
                                        const std::vector<DensePolynomial>& p, const BigExponent& s_block,
                                        std::uint64_t n) {
  if (members.empty() || members.size() != p.size()) throw std::invalid_argument("one polynomial per member");
  for (auto k : members)
    if (k >= fam.functions.size()) throw std::invalid_argument("member outside the family");
  const auto& own = fam.functions[members[0]];
  std::size_t pos = own.terms().size();
  for (std::size_t t = 0; t < own.terms().size(); ++t)
    if (own.terms()[t].exponent == s_block) pos = t;
  if (pos == own.terms().size()) throw std::invalid_argument("block is not an exponent of the first member");

  SeparationReport rep;
  rep.block = s_block;
  rep.block_row = fam.rows[members[0]][pos];
  rep.n_samples = n;
  const RadiusSpec r = r_opt(s_block);
  const double w = r.one_minus_r_squared();
  const double lw = r.log_one_minus_r_squared();

  std::vector<Complex> acc(n);
  std::vector<Complex> p0_vals;
  double scale = 0.0;
  std::size_t total_terms = 0;
  for (std::size_t k = 0; k < members.size(); ++k) {
    const auto& f = fam.functions[members[k]];
    const auto dp = p[k].derivative();
    const auto fv = eval_circle(f, r, n);
    const auto dv = eval_derivative_circle(f, r, n, lw);
    const auto pv = eval_polynomial_circle(p[k], r, n);
    const auto dpv = eval_polynomial_circle(dp, r, n);
    for (std::uint64_t j = 0; j < n; ++j) acc[j] += w * dpv.values[j] * fv.values[j] + pv.values[j] * dv.values[j];
    if (k == 0) p0_vals = pv.values;

    const double pn = p[k].sup_bound(1.0);
    const double dpn = dp.sup_bound(1.0);
    const double fsum = abs_sum(f, r);
    double usum = 0.0, dyadic = 0.0;
    for (std::size_t t = 0; t < f.terms().size(); ++t) {
      if (k == 0 && t == pos) continue;
      usum += std::abs(f.terms()[t].coeff) * u_func(f.terms()[t].exponent, r);
      dyadic += std::ldexp(1.0, -(fam.rows[members[k]][t] + rep.block_row));
    }
    const double poly = dpn * w * fsum;
    if (k == 0) {
      rep.cross_own = pn * usum;
      rep.poly_own = poly;
    } else {
      rep.cross_other += pn * usum;
      rep.poly_other += poly;
    }
    rep.dyadic_budget += pn * dyadic + poly;
    rep.tail_budget += pn * std::ldexp(1.0, -(rep.block_row + fam.n_trunc)) + dpn * w * fam.tail(members[k], r);
    // evaluated magnitudes, plus the shift of the polynomial from r to its double
    scale += dpn * w * fsum + pn * (usum + u_func(s_block, r)) + dpn * (usum + 1.0);
    total_terms += f.terms().size() + p[k].coeffs().size() + 1;
  }

  double pmax = 0.0;
  for (std::uint64_t j = 0; j < n; ++j) {
    rep.lhs = std::max(rep.lhs, std::abs(acc[j]));
    pmax = std::max(pmax, std::abs(p0_vals[j]));
  }
  rep.main_term = u_func(s_block, r) * pmax;
  rep.rounding = 64.0 * kEps * static_cast<double>(total_terms) * (scale + rep.main_term);
  rep.error_budget = rep.cross_own + rep.poly_own + rep.cross_other + rep.poly_other + rep.rounding;
  rep.consistent = rep.lhs >= rep.main_term - rep.error_budget;

  rep.p0_at_zero = p[0].coeffs().empty() ? 0.0 : std::abs(p[0].coeffs()[0]);
  rep.vacuous = rep.p0_at_zero == 0.0;
  rep.ratio = rep.vacuous ? std::numeric_limits<double>::infinity() : rep.lhs / rep.p0_at_zero;
  return rep;
}

DensePolynomial random_polynomial(std::mt19937_64& rng, int degree) {
  if (degree < 0) throw std::invalid_argument("degree must be nonnegative");
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<Complex> c(static_cast<std::size_t>(degree) + 1);
  for (auto& x : c) {
    do x = Complex(unif(rng), unif(rng));
    while (std::norm(x) > 1.0);
  }
  return DensePolynomial(std::move(c));
}

DensePolynomial normalize_at_zero(const DensePolynomial& p) {
  if (p.coeffs().empty() || p.coeffs()[0] == Complex{}) throw std::invalid_argument("p(0) = 0 cannot be normalized");
  return p.scaled(1.0 / p.coeffs()[0]);
}

double pow3_seminorm_constant() {
  static const double value = [] {
    // h(y) = y e^{-y}; the sum over y 3^mu is 3-periodic in log, so y in [1, 3] covers everything.
    double best = 0.0;
    constexpr int kGrid = 20000;
    for (int g = 0; g <= kGrid; ++g) {
      const double y0 = 1.0 + 2.0 * g / kGrid;
      double acc = 0.0;
      for (int mu = -40; mu <= 6; ++mu) {
        const double y = y0 * std::pow(3.0, mu);
        acc += y * std::exp(-y);
      }
      best = std::max(best, acc);
    }
    // grid step 1e-4 and |d/dy0| < 3 leave < 1e-3; terms r < e^{-1/2} are below 1e-12 for exponents >= 81
    return 2.0 * std::exp(0.5) * (best + 1e-2) + 1e-12;
  }();
  return value;
}

double little_bloch_norm_upper(const BlockTable& t, const std::vector<int>& i_set,
                               const std::vector<DensePolynomial>& p) {
  if (i_set.size() != p.size()) throw std::invalid_argument("one polynomial per function");
  const double lam = pow3_seminorm_constant();
  double total = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) {
    const int i = i_set[m];
    if (!t.contains(i, i)) throw std::invalid_argument("function index outside the table");
    const double d = t.delta(i);  // largest coefficient of f_i
    // (1-r^2) sum_{m >= s} r^{3^m} <= 2 sum 3^{-m} h(3^m t) <= 3^{1-s} / e
    const double s0 = static_cast<double>(std::min<BigInt>(t.entry(i, i).s, BigInt(2000)));
    const double f_weighted = 1.0 + d * std::exp((1.0 - s0) * std::log(3.0) - 1.0);
    const double at_zero = p[m].coeffs().empty() ? 0.0 : std::abs(p[m].coeffs()[0]);
    total += at_zero + p[m].derivative().sup_bound(1.0) * f_weighted + p[m].sup_bound(1.0) * d * lam;
  }
  return total;
}

double u_set_measure(const BlockTable& t, const DensePolynomial& p, int i, int j, std::uint64_t n,
                     std::uint64_t seed, std::uint64_t work_budget) {
  if (!t.contains(i, j)) throw std::invalid_argument("block outside the table");
  const double level = std::ldexp(1.0, j - 1);
  if (p.sup_bound(1.0) < level) return 0.0;
  const BigInt& s = t.entry(i, j).s;
  if (BigInt(n) * (s + 1) > work_budget)
    throw std::runtime_error("block (" + std::to_string(i) + "," + std::to_string(j) + ") is beyond the sampling budget");
  const RadiusSpec r = t.radius(i, j);
  const double thr = block_threshold(s, j, t.c_hat);
  const auto fv = eval_circle_random(SparseSeries::pow3_block(static_cast<std::int64_t>(s)), r, n, seed);
  const auto u = random_circle_points(n, seed);
  constexpr double kTurn = 2.0 * std::numbers::pi / 18446744073709551616.0;
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < n; ++k) {
    if (std::abs(fv.values[k]) < thr) continue;
    const double a = static_cast<double>(u[k]) * kTurn;
    if (std::abs(p(r.value() * Complex(std::cos(a), std::sin(a)))) >= level) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

namespace {

double mean_power_outside(const std::vector<Complex>& v, double level, double q) {
  // (mean of |p|^q over |p| < level)^{1/q}, log domain
  double top = -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  for (const auto& x : v) {
    if (std::abs(x) >= level || x == Complex{}) continue;
    logs.push_back(q * std::log(std::abs(x)));
    top = std::max(top, logs.back());
  }
  if (logs.empty()) return 0.0;
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - top);
  return std::exp((top + std::log(acc / static_cast<double>(v.size()))) / q);
}

BootstrapLink link(std::string name, double value, double bound) {
  return {std::move(name), value, bound, value <= bound * (1.0 + 1e-12), true};
}

}  // namespace

BootstrapReport bootstrap_step_check(const BlockTable& t, const std::vector<int>& i_set,
                                     const std::vector<DensePolynomial>& p, int j_level, std::uint64_t n,
                                     std::uint64_t seed) {
  if (i_set.empty() || i_set.size() != p.size()) throw std::invalid_argument("one polynomial per function");
  for (std::size_t m = 1; m < i_set.size(); ++m)
    if (i_set[m] <= i_set[m - 1]) throw std::invalid_argument("function indices must increase");
  const int jl = j_level;
  if (jl <= i_set.back()) throw std::invalid_argument("J must exceed every function index");
  if (jl + 1 > t.j_max) throw std::invalid_argument("J + 1 is beyond the table");

  BootstrapReport rep;
  rep.j_level = jl;
  rep.profile = profile_name(t.profile);
  rep.c_hat = t.c_hat;
  rep.norm_upper = little_bloch_norm_upper(t, i_set, p);
  rep.chain_measure_bound = std::ldexp(static_cast<double>(jl) + 1.0, -(jl + 5));
  auto fail = [&](const std::string& name) {
    if (rep.pass) rep.failed_link = name;
    rep.pass = false;
  };
  if (rep.norm_upper > 1.0) {
    rep.hypotheses_hold = false;
    fail("norm");
  }

  // blocks of every function up to the table depth, for the Parseval identity
  struct Block { BigInt s; int j; std::size_t m; };
  std::vector<Block> blocks;
  for (std::size_t m = 0; m < i_set.size(); ++m)
    for (int j = i_set[m]; j <= t.j_max; ++j) blocks.push_back({t.entry(i_set[m], j).s, j, m});
  std::sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) { return a.s < b.s; });
  for (std::size_t b = 1; b < blocks.size(); ++b)
    if (blocks[b].s <= 2 * blocks[b - 1].s) throw std::logic_error("blocks overlap; Parseval split does not apply");
  for (const auto& q : p)
    if (BigInt(q.degree()) >= blocks.front().s)  // 3^s > s, so this keeps z^k 3^m products distinct
      throw std::invalid_argument("polynomial degree too large for the block spacing");

  for (std::size_t k = 0; k < i_set.size(); ++k) {
    BootstrapMember mem;
    mem.i = i_set[k];
    const auto& pk = p[k];
    const auto pseed = block_stream_seed(seed, mem.i, jl);

    // hypotheses at level J
    const auto r_next = t.radius(mem.i, jl + 1);
    mem.lp_next = lp_mean(eval_polynomial_circle(pk, r_next, n), std::ldexp(1.0, jl + 1));
    auto hyp = link("hypothesis ||p||_{2^{J+1}} on r(i,J+1)", mem.lp_next, std::ldexp(1.0, jl + 1));
    BootstrapLink h_u;
    try {
      mem.u_at_j = u_set_measure(t, pk, mem.i, jl, n, pseed);
      h_u = link("hypothesis m(U_{i,J})", mem.u_at_j, static_cast<double>(jl) / std::ldexp(1.0, jl + 5));
    } catch (const std::runtime_error&) {
      h_u = {"hypothesis m(U_{i,J})", 0.0, static_cast<double>(jl) / std::ldexp(1.0, jl + 5), false, false};
    }
    for (const auto& h : {h_u, hyp}) {
      mem.links.push_back(h);
      if (!h.pass) {
        rep.hypotheses_hold = false;
        fail(h.name);
      }
    }

    // A and the L^{2^J} mean on r(i,J)
    const auto r_j = t.radius(mem.i, jl);
    const auto pv = eval_polynomial_circle(pk, r_j, n);
    const double level = std::ldexp(1.0, jl - 1);
    std::uint64_t in_a = 0;
    for (const auto& v : pv.values)
      if (std::abs(v) >= level) ++in_a;
    mem.measure_a = static_cast<double>(in_a) / static_cast<double>(n);
    const double q = std::ldexp(1.0, jl);
    mem.lp_j = lp_mean(pv, q);
    const double outside = mean_power_outside(pv.values, level, q);
    const double lp_double = lp_mean(pv, 2.0 * q);
    mem.split_rhs = outside + std::sqrt(mem.measure_a) * lp_double;

    std::vector<BootstrapLink> chain;
    chain.push_back(link("m(A) <= m(U_{i,J}) + 2^{-(J+5)}", mem.measure_a, mem.u_at_j + std::ldexp(1.0, -(jl + 5))));
    chain.push_back(link("m(A) <= 1/16", mem.measure_a, 1.0 / 16.0));
    chain.push_back(link("Minkowski + Cauchy-Schwarz", mem.lp_j, mem.split_rhs));
    chain.push_back(link("outside A <= 2^{J-1}", outside, level));
    chain.push_back(link("||p||_{2^{J+1}} on r(i,J) <= on r(i,J+1)", lp_double, mem.lp_next));
    chain.push_back(link("chain ||p||_{2^J} on r(i,J)", mem.lp_j, q));

    // X on r(i,J-1), exactly
    const auto r_m = t.radius(mem.i, jl - 1);
    const double rd = r_m.value();
    const XFloat big_l = r_m.log_inv_gap();
    const double dj = t.delta(jl - 1);
    const XFloat x2 = XFloat(dj * dj) * XFloat(std::pow(pk.l2_mean(rd), 2)) *
                      pow3_block_power_sum(t.entry(mem.i, jl - 1).s, r_m, 2.0) / big_l;
    mem.x_squared = x2.to_double();
    mem.x_value = std::sqrt(mem.x_squared);

    // int |F|^2 over the same circle: common constant part plus every block
    std::vector<Complex> common;
    for (const auto& pm : p) {
      if (common.size() < pm.coeffs().size()) common.resize(pm.coeffs().size());
      for (std::size_t c = 0; c < pm.coeffs().size(); ++c) common[c] += pm.coeffs()[c];
    }
    XFloat total(std::pow(DensePolynomial(common).l2_mean(rd), 2));
    for (const auto& b : blocks) {
      const double db = t.delta(b.j);
      total += XFloat(db * db) * XFloat(std::pow(p[b.m].l2_mean(rd), 2)) * pow3_block_power_sum(b.s, r_m, 2.0);
    }
    mem.exp_mean = std::exp((total / (XFloat(8.0) * big_l)).to_double());
    chain.push_back(link("exp(X(X-1)) <= exp of mean", std::exp(mem.x_value * (mem.x_value - 1.0)), mem.exp_mean));
    chain.push_back(link("exp of mean <= 2", mem.exp_mean, 2.0));
    chain.push_back(link("X <= 2", mem.x_value, 2.0));
    chain.push_back(link("X^2 <= 32", mem.x_squared, 32.0));

    // conclusion at level J-1
    try {
      mem.u_at_j_minus = u_set_measure(t, pk, mem.i, jl - 1, n, pseed ^ 0x5bd1e995ULL);
      chain.push_back(link("conclusion m(U_{i,J-1})", mem.u_at_j_minus, static_cast<double>(jl - 1) / std::ldexp(1.0, jl + 4)));
    } catch (const std::runtime_error&) {
      chain.push_back({"conclusion m(U_{i,J-1})", 0.0, static_cast<double>(jl - 1) / std::ldexp(1.0, jl + 4), false, false});
    }
    for (auto& c : chain) {
      if (!c.pass) fail(c.name);
      mem.links.push_back(std::move(c));
    }
    rep.members.push_back(std::move(mem));
  }
  return rep;
}

}  // namespace lacunary
