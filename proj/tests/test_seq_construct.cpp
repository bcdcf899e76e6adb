#include <doctest.h>

#include "lacunary/seq.hpp"

#include <cmath>
#include <set>

using namespace lacunary;

namespace {

// U_a(r_b) in long double for moderate a, b
long double u_direct(long double a, long double b) {
  const long double r2 = 1.0L - 1.0L / b;
  return (1.0L - r2) * a * std::pow(r2, (a - 1.0L) / 2.0L);
}

}  // namespace

TEST_CASE("exponent table, small sizes") {
  const auto t1 = build_lemma21(1, 2);
  REQUIRE(t1.entries.size() == 1);
  CHECK(t1.s(1, 1) >= 2);
  CHECK(verify_lemma21(t1).pass);

  const auto t3 = build_lemma21(3, 2);
  CHECK(t3.entries.size() == 6);
  const auto rep = verify_lemma21(t3);
  CHECK(rep.pass);
  CHECK(rep.checks_iii == 30);
  // the damping condition against a long double evaluation for the small entries
  for (const auto& a : t3.entries)
    for (const auto& b : t3.entries) {
      if (&a == &b || a.s > BigInt(1) << 60 || b.s > BigInt(1) << 60) continue;
      CHECK(u_direct(static_cast<long double>(a.s), static_cast<long double>(b.s)) <
            std::ldexp(1.0L, -(a.n + b.n)));
    }
}

TEST_CASE("exponent table, depth 12") {
  const auto t = build_lemma21(12);
  CHECK(t.entries.size() == 78);
  const auto rep = verify_lemma21(t);
  CHECK(rep.pass);
  CHECK(rep.checks_iii == 78 * 77);
  CHECK(rep.worst_iii_log_margin > 0);
  for (const auto& e : t.entries) CHECK(e.retries < 200);
  // diagonal growth
  for (int n = 1; n <= 12; ++n) CHECK(t.s(n, n) >= (BigInt(1) << (n - 1)) * t.s(1, 1));
}

TEST_CASE("exponent table verifier catches violations") {
  auto t = build_lemma21(3, 2);
  auto equal = t;
  equal.entries[1].s = equal.entries[0].s;  // s(2,1) = s(1,1)
  bool saw_i = false;
  for (const auto& v : verify_lemma21(equal).violations) saw_i |= v.condition == '1';
  CHECK(saw_i);

  auto ratio = t;
  ratio.entries[1].s = (3 * ratio.entries[0].s + 1) / 2;  // ceil(1.5 s(1,1))
  const auto rep = verify_lemma21(ratio);
  CHECK_FALSE(rep.pass);
  bool saw_ii = false;
  for (const auto& v : rep.violations) saw_ii |= v.condition == '2';
  CHECK(saw_ii);

  auto damp = t;
  damp.entries[2].s = damp.entries[1].s + 1;  // s(2,2) right next to s(2,1)
  bool saw_iii = false;
  for (const auto& v : verify_lemma21(damp).violations) saw_iii |= v.condition == '3';
  CHECK(saw_iii);

  auto missing = t;
  missing.entries.pop_back();
  CHECK_FALSE(verify_lemma21(missing).pass);
}

TEST_CASE("single column tables") {
  const auto t = build_lemma21(40, 2, 1);
  CHECK(t.entries.size() == 40);
  CHECK(verify_lemma21(t).pass);
  for (int n = 2; n <= 40; ++n) CHECK(t.column1(n) >= 2 * t.column1(n - 1));
}

TEST_CASE("binary branch sets") {
  const auto zero = alpha_set({0.0, 6});
  const std::vector<BigInt> z{2, 4, 8, 16, 32, 64};
  CHECK(zero == z);
  const auto one = alpha_set({1.0, 5});
  const std::vector<BigInt> o{3, 7, 15, 31, 63};
  CHECK(one == o);
  // 0.5 = 0.1000... in its terminating expansion
  const auto half = alpha_set({0.5, 4});
  const std::vector<BigInt> h{3, 6, 12, 24};
  CHECK(half == h);
  CHECK_THROWS(alpha_set({1.5, 3}));

  // prefix agreement count
  const std::vector<double> alphas{0.0, 0.1, 0.25, 0.3, 0.5, 0.7, 0.8125, 1.0};
  for (double a : alphas)
    for (double b : alphas) {
      if (a == b) continue;
      const AlphaBranch x{a, 64}, y{b, 64};
      const int d = divergence_depth(x, y);
      const auto sa = alpha_set(x), sb = alpha_set(y);
      std::vector<BigInt> common;
      std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
      CHECK(static_cast<int>(common.size()) == d - 1);
    }

  // residual of eight branches
  std::vector<AlphaBranch> others;
  for (std::size_t k = 1; k < alphas.size(); ++k) others.push_back({alphas[k], 64});
  int d_max = 0;
  for (const auto& o : others) d_max = std::max(d_max, divergence_depth({alphas[0], 64}, o));
  const auto res = alpha_residual({alphas[0], 64}, others);
  CHECK(static_cast<int>(res.size()) >= 64 - d_max);
  CHECK_FALSE(res.empty());
  for (std::size_t k = 1; k < res.size(); ++k) CHECK(res[k - 1] < res[k]);
}

TEST_CASE("delta coefficients") {
  CHECK(delta_coeff(1, 1.0) == doctest::Approx(512.0));
  CHECK(delta_coeff(4, 1.0) == doctest::Approx(256.0));
  double prev = 1e300;
  for (int j = 1; j < 200; ++j) {
    CHECK(delta_coeff(j, 2.3) < prev);
    prev = delta_coeff(j, 2.3);
  }
  CHECK_THROWS(delta_coeff(0, 1.0));
}

TEST_CASE("block X function") {
  for (int s = 1; s <= 12; ++s) {
    const auto r = RadiusSpec::one_minus_pow3(2 * s);
    double direct = 0.0;
    for (int m = s; m <= 2 * s; ++m) direct += std::exp(std::pow(3.0, m) * std::log1p(-std::pow(3.0, -2 * s)));
    const double x = block_xfunc(s, r).to_double();
    CHECK(x == doctest::Approx(direct / std::sqrt(2 * s * std::log(3.0))).epsilon(1e-10));
    // each term lies in (e^{-1}, 1)
    CHECK(x > (s + 1) * std::exp(-1.0) / std::sqrt(2 * s * std::log(3.0)) * 0.999);
    CHECK(x < (s + 1) / std::sqrt(2 * s * std::log(3.0)));
  }
  // X_s(r) -> 0 as r -> 1
  double prev = 1e9;
  for (int k = 40; k <= 4000; k += 400) {
    const double x = block_xfunc(10, RadiusSpec::one_minus_pow3(k)).to_double();
    CHECK(x < prev);
    prev = x;
  }
  CHECK(prev < 0.2);
  // fixed r = 0.9: X_s(0.9) <= (s+1) 0.9^{3^s} / sqrt(log 10)
  for (int s = 1; s <= 6; ++s) {
    const double x = block_xfunc(s, RadiusSpec::plain(0.9)).to_double();
    CHECK(x <= (s + 1) * std::pow(0.9, std::pow(3.0, s)) / std::sqrt(std::log(10.0)) * (1 + 1e-12));
  }
}

TEST_CASE("block table, relaxed single block") {
  Prop37Options opt;
  opt.mc_samples = 1 << 15;
  const auto t = build_prop37(1, ConstantProfile::Relaxed, 2.3, opt);
  REQUIRE(t.entries.size() == 1);
  CHECK(t.entry(1, 1).s > 8);
  CHECK(t.entry(1, 1).measure.evaluated);
  CHECK(t.entry(1, 1).measure.pass);
  const auto rep = verify_prop37(t);
  CHECK(rep.pass);
  CHECK(rep.measure_certified == 1);
}

TEST_CASE("block table, literal first block") {
  Prop37Options opt;
  opt.mc_samples = 1 << 14;
  const auto t = build_prop37(1, ConstantProfile::Literal, 2.3, opt);
  CHECK(t.entry(1, 1).s > 256);
  const auto rep = verify_prop37(t);
  CHECK(rep.pass);

  auto low = t;
  low.entries[0].s = 200;
  CHECK_FALSE(verify_prop37(low).deterministic_pass);
}

TEST_CASE("block table, deeper tables") {
  Prop37Options opt;
  opt.mc_samples = 1 << 12;
  const auto t = build_prop37(3, ConstantProfile::Relaxed, 2.3, opt);
  CHECK(t.entries.size() == 6);
  const auto rep = verify_prop37(t);
  CHECK(rep.deterministic_pass);
  CHECK(rep.radii_increasing);
  CHECK(rep.measure_failed == 0);
  // the damping bound on a worked instance: i = i' = j = 1, j' = 2
  const double expected = std::log(1.0 / delta_coeff(1, 2.3)) - 9 * std::log(2.0);
  CHECK(prop37_damping_bound(1, 1, 1, 2, 2.3).log() == doctest::Approx(expected).epsilon(1e-14));
  for (const auto& a : t.entries) {
    CHECK(a.limit_measure > 1.0 - std::ldexp(1.0, -(a.j + 5)));
    for (const auto& b : t.entries) {
      if (&a == &b) continue;
      CHECK(block_xfunc(a.s, RadiusSpec::one_minus_pow3(2 * b.s)) <= prop37_damping_bound(a.i, a.j, b.i, b.j, 2.3));
    }
  }
  // tampering with (2.i.j): put block (1,2) next to block (1,1)
  auto bad = t;
  bad.entries[1].s = bad.entries[0].s + 1;
  CHECK_FALSE(verify_prop37(bad).deterministic_pass);
}

TEST_CASE("block measure sampler") {
  // both samplers agree with each other and with the limit law for a mid-size block
  const auto a = block_measure(200, 1, 2.3, 1 << 14, 11, std::uint64_t{1} << 40);
  REQUIRE(a.evaluated);
  CHECK(a.measure > 0.98);
  CHECK(std::abs(a.measure - block_measure_limit(200, 1, 2.3)) < 0.01);
  const auto b = block_measure(BigInt(1) << 40, 1, 2.3, 1 << 14, 11, std::uint64_t{1} << 40);
  CHECK_FALSE(b.evaluated);
  CHECK(block_stream_seed(1, 1, 2) != block_stream_seed(1, 2, 1));
}
