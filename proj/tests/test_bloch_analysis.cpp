#include <doctest.h>

#include "lacunary/bloch.hpp"
#include "lacunary/corpus.hpp"

#include <cmath>
#include <random>

using namespace lacunary;

namespace {

SparseSeries dyadic_series(int k_max, double coeff = 1.0) {
  std::vector<SeriesTerm> terms;
  for (int k = 1; k <= k_max; ++k) terms.push_back({coeff, std::uint64_t{1} << k});
  return SparseSeries(0.0, terms);
}

SparseSeries log_series(int terms) {
  std::vector<SeriesTerm> t;
  for (int k = 1; k <= terms; ++k) t.push_back({1.0 / k, static_cast<std::uint64_t>(k)});
  return SparseSeries(0.0, t);
}

}  // namespace

TEST_CASE("norm lower bounds") {
  const std::vector<RadiusSpec> grid{RadiusSpec::plain(0.0), RadiusSpec::plain(0.5), RadiusSpec::plain(0.9)};
  CHECK(bloch_norm_lower(SparseSeries::monomial(1.0, 1), grid, 16).value == doctest::Approx(1.0));
  CHECK(bloch_norm_lower(SparseSeries(1.0), grid, 16).value == doctest::Approx(1.0));
  CHECK_THROWS(bloch_norm_lower(SparseSeries(1.0), {}, 16));

  // a monomial on a fine grid reaches its maximum within 1%
  for (std::uint64_t e : {3ULL, 17ULL, 400ULL}) {
    std::vector<RadiusSpec> fine;
    for (int k = 1; k < 2000; ++k) fine.push_back(RadiusSpec::plain(k / 2000.0));
    const auto est = bloch_norm_lower(SparseSeries::monomial(Complex(0, 2.5), e), fine, 8);
    CHECK(est.value == doctest::Approx(2.5 * u_max(e)).epsilon(0.01));
    CHECK(est.value <= 2.5 * u_max(e) + 1e-12);
  }

  // refining the grid never lowers the estimate
  const auto f = dyadic_series(10);
  std::vector<RadiusSpec> coarse, refined;
  for (int m = 1; m <= 10; ++m) {
    coarse.push_back(RadiusSpec::plain(1 - std::ldexp(1.0, -m)));
    refined.push_back(RadiusSpec::plain(1 - std::ldexp(1.0, -m)));
    refined.push_back(RadiusSpec::plain(1 - 0.7 * std::ldexp(1.0, -m)));
  }
  CHECK(bloch_norm_lower(f, refined, 2048).value >= bloch_norm_lower(f, coarse, 1024).value);
}

TEST_CASE("lp means") {
  CHECK(lp_mean(eval_circle(SparseSeries(1.0), RadiusSpec::plain(0.3), 64), 7.0) == doctest::Approx(1.0));
  CHECK(lp_mean(eval_circle(SparseSeries::monomial(1.0, 1), RadiusSpec::plain(0.5), 64), 2.0) == doctest::Approx(0.5));
  const auto block = eval_circle(SparseSeries::pow3_block(1), RadiusSpec::one_minus_pow3(2), 64);
  const double parseval = std::pow(8.0 / 9, 6) + std::pow(8.0 / 9, 18);
  CHECK(parseval == doctest::Approx(0.61329).epsilon(1e-5));
  CHECK(lp_mean(block, 2.0) == doctest::Approx(std::sqrt(parseval)).epsilon(1e-12));
  CHECK(lp_mean(block, 2.0) == doctest::Approx(0.783).epsilon(1e-3));
  CHECK_THROWS(lp_mean(block, 0.5));

  // Holder monotonicity, including p = 2^J far beyond the double range of |g|^p
  const auto g = eval_circle(dyadic_series(12).scaled(Complex(30, 10)), RadiusSpec::plain(0.999), 1 << 13);
  double prev = 0.0;
  for (double p : {1.0, 1.5, 2.0, 4.0, 16.0, 256.0, 4096.0, 65536.0}) {
    const double v = lp_mean(g, p);
    CHECK(std::isfinite(v));
    CHECK(v >= prev - 1e-9);
    prev = v;
  }
}

TEST_CASE("growth bound") {
  std::vector<RadiusSpec> circles;
  for (int k = 1; k <= 19; ++k) circles.push_back(RadiusSpec::plain(0.05 * k));
  for (int k = 2; k <= 12; ++k) circles.push_back(RadiusSpec::one_minus_pow3(k));

  const auto zero = growth_bound_check(SparseSeries(), 1.0, circles, 32);
  CHECK(zero.pass);
  CHECK(zero.max_ratio == 0.0);

  const auto z = growth_bound_check(SparseSeries::monomial(1.0, 1), 1.0, {RadiusSpec::plain(0.9)}, 8);
  CHECK(z.pass);
  CHECK(z.max_ratio == doctest::Approx(0.9 / (0.5 * std::log(19.0))).epsilon(1e-12));

  // log 1/(1-z) has seminorm 2; truncation keeps it close to extremal on moderate radii
  const auto lg = log_series(6000);
  const std::vector<RadiusSpec> near{RadiusSpec::plain(0.5), RadiusSpec::plain(0.9), RadiusSpec::plain(0.99)};
  const auto rep = growth_bound_check(lg, 2.0, near, 64);
  CHECK(rep.pass);
  CHECK(rep.max_ratio > 0.85);
  CHECK(rep.max_ratio <= 1.0);

  // a deliberately too small norm is caught with a witness
  const auto bad = growth_bound_check(lg, 0.5, near, 64);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.violations.empty());
}

TEST_CASE("Makarov moment and exponential forms") {
  const auto mono = makarov_moment_check(SparseSeries::monomial(1.0, 1), 1.0, RadiusSpec::plain(0.9), 1, 64);
  CHECK(mono.pass);
  CHECK(mono.lhs == doctest::Approx(0.9));
  CHECK(mono.rhs == doctest::Approx(1 + std::sqrt(std::log(10.0))).epsilon(1e-12));
  CHECK(makarov_moment_check(SparseSeries(), 0.0, RadiusSpec::plain(0.9), 3, 64).pass);

  // lacunary series normalized by the coefficient bound
  auto f = dyadic_series(14);
  const double up = bloch_norm_upper(f);
  f = f.scaled(1.0 / up);
  for (int n : {1, 2, 4, 8}) {
    const auto rep = makarov_moment_check(f, 1.0, RadiusSpec::plain(1 - 1e-4), n, 1 << 16);
    CHECK(rep.pass);
    CHECK(rep.margin > 0);
  }

  const auto e0 = makarov_exp_check(SparseSeries(), 0.0, RadiusSpec::plain(0.9), 16);
  CHECK(e0.lhs == doctest::Approx(1.0));
  const auto e1 = makarov_exp_check(SparseSeries::monomial(1.0, 1), 1.0, RadiusSpec::plain(0.9), 64);
  CHECK(e1.lhs <= 1.045);
  CHECK(e1.lhs == doctest::Approx(std::exp(0.81 / (8 * std::log(10.0)))).epsilon(1e-12));
  CHECK_THROWS(makarov_exp_check(SparseSeries(), 0.0, RadiusSpec::plain(0.5), 16));
  CHECK_THROWS(makarov_exp_check(SparseSeries(), 1.5, RadiusSpec::plain(0.9), 16));

  // normalized block at its own radius
  for (int s = 1; s <= 6; ++s) {
    const auto b = SparseSeries::pow3_block(s);
    const auto rep = makarov_exp_check(b.scaled(1.0 / bloch_norm_upper(b)), 1.0, RadiusSpec::one_minus_pow3(2 * s), 1 << 12);
    CHECK(rep.pass);
    CHECK(rep.lhs < 2.05);
  }
}

TEST_CASE("little Bloch profiles") {
  std::vector<RadiusSpec> radii;
  for (int m = 1; m <= 16; ++m) radii.push_back(RadiusSpec::plain(1 - std::ldexp(1.0, -m)));

  const auto poly = little_bloch_profile(SparseSeries(1.0, {{2.0, 1}, {-1.0, 5}}), radii, 64);
  CHECK(poly.monotone_tail);
  CHECK(poly.seminorm.back() < 1e-3);

  const auto gap = little_bloch_profile(dyadic_series(20), radii, 4096);
  for (std::size_t k = 3; k < gap.seminorm.size(); ++k) CHECK(gap.seminorm[k] > 0.3);

  CHECK_THROWS(little_bloch_profile(SparseSeries(1.0), {RadiusSpec::plain(0.5), RadiusSpec::plain(0.4)}, 8));
}

TEST_CASE("shared corpora") {
  const auto corpus = makarov_corpus();
  REQUIRE(corpus.size() == 20);
  for (const auto& c : corpus) {
    CHECK(c.norm_upper <= 1.0 + 1e-12);
    CHECK(c.f.constant() == Complex{});
    CHECK(lacunary_membership(c.f).lacunary);
    CHECK(c.f.terms().back().exponent.value() > 1000000);
  }
  const auto mr = makarov_radii();
  CHECK(mr.size() == 12);
  CHECK(mr.front().log_inv_gap().to_double() == doctest::Approx(1.0));
  CHECK(mr.back().log_inv_gap().to_double() == doctest::Approx(6 * std::log(10.0)).epsilon(1e-9));
  const auto gr = growth_radii();
  CHECK(gr.size() == 64);
  for (std::size_t k = 1; k < gr.size(); ++k) CHECK(radius_less(gr[k - 1], gr[k]));
}
