#include <doctest.h>

#include "lacunary/bloch.hpp"
#include "lacunary/index.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace lacunary;

namespace {

const ExponentTable& depth24() {
  static const ExponentTable t = build_lemma21(24, 2);
  return t;
}

// (1 - 1/s)^{(s-1)/2}, the value of U_s at its own optimal radius
long double u_at_own(const BigInt& s) {
  const long double x = s.convert_to<long double>();
  return std::exp((x - 1.0L) / 2.0L * std::log1p(-1.0L / x));
}

}  // namespace

TEST_CASE("column generators") {
  const auto& t = depth24();
  const auto one = thm13_functions(t, {1}, 1);
  REQUIRE(one.functions.size() == 1);
  REQUIRE(one.functions[0].terms().size() == 1);
  CHECK(one.functions[0].terms()[0].exponent.value() == t.s(1, 1));
  CHECK(one.functions[0].constant() == Complex(1.0));

  const auto fam = thm13_functions(t, {1, 2, 3}, 24);
  for (std::size_t k = 0; k < fam.functions.size(); ++k) {
    CHECK(fam.functions[k].constant() == Complex(1.0));
    CHECK(lacunary_membership(fam.functions[k]).bloch);
    CHECK(fam.rows[k].front() == static_cast<int>(k) + 1);
    CHECK(fam.rows[k].back() == 24);
  }

  // tail ledger against direct summation of the rows that were dropped
  const auto r = r_opt(BigExponent(t.s(14, 1)));
  double prev = 1e300;
  for (int trunc = 8; trunc <= 16; ++trunc) {
    const auto f = thm13_functions(t, {1}, trunc);
    const double bound = f.tail(0, r);
    double direct = 0.0;
    for (int n = trunc + 1; n <= 24; ++n) direct += std::exp(radial_power(BigExponent(t.s(n, 1)), r));
    CHECK(direct <= bound * (1 + 1e-12));
    CHECK((bound < prev || prev == 0.0));
    prev = bound;
  }
  CHECK(thm13_functions(t, {1}, 8).tail(0, r) > 1.0);
  CHECK(prev < 1e-100);

  CHECK_THROWS_AS(thm13_functions(t, {1}, 25), std::invalid_argument);
  CHECK_THROWS_AS(thm13_functions(t, {30}, 24), std::invalid_argument);
}

TEST_CASE("branch generators") {
  const auto t = build_lemma21(63, 2, 1);
  REQUIRE(verify_lemma21(t).pass);
  const auto fam = thm14_functions({{0.0, 5}, {0.25, 5}, {0.75, 5}}, t);
  // alpha = 0: codes 2, 4, 8, 16, 32
  std::vector<int> expect{2, 4, 8, 16, 32};
  CHECK(fam.rows[0] == expect);
  for (std::size_t k = 0; k < expect.size(); ++k)
    CHECK(fam.functions[0].terms()[k].exponent.value() == t.column1(expect[k]));
  // 0.25 = 0.01..., 0.75 = 0.11...: different first digit, so nothing is shared
  std::set<int> a(fam.rows[1].begin(), fam.rows[1].end());
  for (int n : fam.rows[2]) CHECK(a.count(n) == 0);
  for (const auto& f : fam.functions) CHECK(f.constant() == Complex(1.0));

  CHECK_THROWS_AS(thm14_functions({{0.0, 6}}, t), std::invalid_argument);
  CHECK_THROWS_AS(thm14_functions({{0.5, 3}, {0.5, 3}}, t), std::invalid_argument);
}

TEST_CASE("separation with a single generator") {
  const auto& t = depth24();
  const auto fam = thm13_functions(t, {1}, 24);
  const auto rep = separation_lower_bound(fam, {0}, {DensePolynomial({1.0})}, BigExponent(t.s(20, 1)), 1024);
  CHECK(rep.block_row == 20);
  CHECK(rep.consistent);
  CHECK(rep.ratio >= 0.60);
  CHECK(rep.main_term == doctest::Approx(static_cast<double>(u_at_own(t.s(20, 1)))).epsilon(1e-12));
  // at z = r every term is positive, so the sample maximum is the full sum of U's
  double sum = 0.0;
  for (const auto& term : fam.functions[0].terms()) sum += u_func(term.exponent, r_opt(BigExponent(t.s(20, 1))));
  CHECK(rep.lhs == doctest::Approx(sum).epsilon(1e-12));
  CHECK(rep.dyadic_budget < std::ldexp(1.0, -20));
  CHECK(rep.cross_own <= rep.dyadic_budget);
  CHECK(rep.tail_budget < std::ldexp(1.0, -40));
  CHECK_FALSE(rep.vacuous);
}

TEST_CASE("separation over random polynomials") {
  const auto& t = depth24();
  const auto fam = thm13_functions(t, {1, 2, 3, 4}, 24);
  std::mt19937_64 rng(2024);
  double worst_deep = 1e300;
  int trials = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int extra = static_cast<int>(rng() % 4);
    std::vector<std::size_t> members{0};
    std::vector<DensePolynomial> p{normalize_at_zero(random_polynomial(rng, static_cast<int>(rng() % 9)))};
    for (int m = 1; m <= extra; ++m) {
      members.push_back(static_cast<std::size_t>(m));
      p.push_back(random_polynomial(rng, static_cast<int>(rng() % 9)));
    }
    for (int n : {5, 12, 24}) {
      const auto rep = separation_lower_bound(fam, members, p, BigExponent(t.s(n, 1)), 1024);
      CHECK(rep.consistent);
      CHECK(rep.p0_at_zero == doctest::Approx(1.0));
      if (n == 24) worst_deep = std::min(worst_deep, rep.ratio);
    }
    ++trials;
  }
  CHECK(trials == 30);
  CHECK(worst_deep >= 0.55);
}

TEST_CASE("separation edge cases") {
  const auto& t = depth24();
  const auto fam = thm13_functions(t, {1, 2}, 24);
  const auto rep = separation_lower_bound(fam, {0, 1}, {DensePolynomial({0.0, 1.0}), DensePolynomial({2.0})},
                                          BigExponent(t.s(10, 1)), 256);
  CHECK(rep.vacuous);
  CHECK(std::isinf(rep.ratio));
  CHECK(rep.consistent);
  // the block must belong to the first member
  CHECK_THROWS_AS(separation_lower_bound(fam, {0}, {DensePolynomial({1.0})}, BigExponent(t.s(10, 2)), 256),
                  std::invalid_argument);
  CHECK_THROWS_AS(separation_lower_bound(fam, {0, 1}, {DensePolynomial({1.0})}, BigExponent(t.s(10, 1)), 256),
                  std::invalid_argument);
}

TEST_CASE("branch separation on residual blocks") {
  const auto t = build_lemma21(63, 2, 1);
  std::vector<AlphaBranch> al;
  for (int k = 0; k < 8; ++k) al.push_back({(k + 0.5) / 8.0, 5});
  const auto fam = thm14_functions(al, t);
  std::vector<AlphaBranch> others(al.begin() + 1, al.end());
  const auto residual = alpha_residual(al[0], others);
  REQUIRE_FALSE(residual.empty());

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    // p_0 = 1 + z q
    auto q = random_polynomial(rng, 6).coeffs();
    q.insert(q.begin(), 1.0);
    std::vector<DensePolynomial> p{DensePolynomial(q)};
    std::vector<std::size_t> members{0};
    for (std::size_t m = 1; m < 4; ++m) {
      members.push_back(m);
      p.push_back(random_polynomial(rng, 7));
    }
    const int deepest = static_cast<int>(residual.back());
    const auto rep = separation_lower_bound(fam, members, p, BigExponent(t.column1(deepest)), 1024);
    CHECK(rep.consistent);
    CHECK(rep.ratio >= 0.55);
  }
}

TEST_CASE("U-set measure") {
  Prop37Options opt;
  opt.mc_samples = 1 << 14;
  const auto t = build_prop37(4, ConstantProfile::Relaxed, 2.338, opt);
  CHECK(u_set_measure(t, DensePolynomial(), 1, 1, 1024) == 0.0);
  CHECK(u_set_measure(t, DensePolynomial({1.0}), 1, 2, 1024) == 0.0);
  CHECK(u_set_measure(t, DensePolynomial({1.0}), 2, 3, 1024) == 0.0);

  // constant 2^j leaves exactly E_{1,1}
  const std::uint64_t n = 1 << 14;
  const double m = u_set_measure(t, DensePolynomial({2.0}), 1, 1, n, 99);
  const auto s = t.entry(1, 1).s;
  const auto fv = eval_circle_random(SparseSeries::pow3_block(static_cast<std::int64_t>(s)), t.radius(1, 1), n, 99);
  const double thr = std::sqrt(std::log(std::pow(3.0, 2.0 * static_cast<double>(s))) / (2.338 * 128.0));
  std::uint64_t hits = 0;
  for (const auto& v : fv.values) hits += std::abs(v) >= thr;
  CHECK(m == doctest::Approx(static_cast<double>(hits) / n));
  CHECK(m - 3 * std::sqrt(m * (1 - m) / n) >= 1.0 - std::ldexp(1.0, -6));
  CHECK_THROWS_AS(u_set_measure(t, DensePolynomial({8.0}), 1, 3, 1024), std::runtime_error);
}

TEST_CASE("seminorm constant for powers of three") {
  const double lam = pow3_seminorm_constant();
  // direct maximisation of (1-r^2) sum_m 3^m r^{3^m - 1} over m >= 4 on a fine grid in log(1-r)
  double best = 0.0;
  for (double x = -1.0; x > -60.0; x -= 0.001) {
    const long double r = 1.0L - std::exp(static_cast<long double>(x));
    long double acc = 0.0L;
    for (int m = 4; m < 60; ++m) {
      const long double e = std::pow(3.0L, m);
      acc += (1.0L - r * r) * e * std::exp((e - 1.0L) * std::log(r));
    }
    best = std::max(best, static_cast<double>(acc));
  }
  CHECK(best <= lam);
  CHECK(lam < 2.0 * best);
}

TEST_CASE("bootstrap step") {
  Prop37Options opt;
  opt.mc_samples = 1 << 12;
  const auto t = build_prop37(4, ConstantProfile::Relaxed, 2.338, opt);

  SUBCASE("single small constant") {
    const auto rep = bootstrap_step_check(t, {1}, {DensePolynomial({1e-4})}, 2, 1024);
    CHECK(rep.pass);
    CHECK(rep.hypotheses_hold);
    CHECK(rep.norm_upper <= 1.0);
    CHECK(rep.members[0].measure_a == 0.0);
    CHECK(rep.members[0].lp_j == doctest::Approx(1e-4));
  }

  SUBCASE("two random polynomials at J = 3") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<DensePolynomial> p{random_polynomial(rng, 4), random_polynomial(rng, 4)};
      const double bound = little_bloch_norm_upper(t, {1, 2}, p);
      for (auto& q : p) q = q.scaled(0.99 / bound);
      const auto rep = bootstrap_step_check(t, {1, 2}, p, 3, 4096);
      CHECK(rep.pass);
      CHECK(rep.norm_upper <= 1.0);
      REQUIRE(rep.members.size() == 2);
      for (const auto& m : rep.members) {
        CHECK(m.measure_a <= 1.0 / 16);
        CHECK(m.lp_j <= 8.0);
        CHECK(m.lp_j <= m.split_rhs * (1 + 1e-12));
        CHECK(m.x_value <= 2.0);
        CHECK(m.x_squared <= 32.0);
        CHECK(m.u_at_j_minus <= 2.0 / 128.0);
        for (const auto& l : m.links) CHECK(l.evaluated);
      }
    }
  }

  SUBCASE("Minkowski split with a large polynomial") {
    // too large for the norm hypothesis, but the split is a plain inequality on samples
    const DensePolynomial p({3.0, 2.0, 1.0});
    const auto rep = bootstrap_step_check(t, {1}, {p}, 2, 4096);
    CHECK_FALSE(rep.pass);
    CHECK(rep.failed_link == "norm");
    const auto& m = rep.members[0];
    CHECK(m.measure_a > 0.0);
    CHECK(m.lp_j <= m.split_rhs * (1 + 1e-12));
  }

  CHECK_THROWS_AS(bootstrap_step_check(t, {2}, {DensePolynomial({1e-4})}, 2, 256), std::invalid_argument);
  CHECK_THROWS_AS(bootstrap_step_check(t, {1}, {DensePolynomial({1e-4})}, 4, 256), std::invalid_argument);
}
