#include "lacunary/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace lacunary {

std::vector<CorpusEntry> makarov_corpus(std::uint64_t seed) {
  static constexpr double kRatios[] = {1.5, 2.0, 2.5, 3.0, 4.0};
  static const char* kStyles[] = {"ones", "alternating", "unimodular", "decaying"};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<CorpusEntry> out;
  for (int style = 0; style < 4; ++style)
    for (double q : kRatios) {
      std::vector<SeriesTerm> terms;
      int m = 0;
      for (std::uint64_t e = 1; e < 30000000; e = static_cast<std::uint64_t>(std::ceil(q * static_cast<double>(e))), ++m) {
        Complex c = 1.0;
        if (style == 1) c = (m % 2) ? -1.0 : 1.0;
        if (style == 2) c = std::polar(1.0, angle(rng));
        if (style == 3) c = 1.0 / std::sqrt(m + 1.0);
        terms.push_back({c, e});
      }
      SparseSeries f(0.0, std::move(terms));
      f = f.scaled((1.0 - 1e-12) / bloch_norm_upper(f));  // stays <= 1 after rounding
      char q_text[16];
      std::snprintf(q_text, sizeof q_text, "%g", q);
      out.push_back({std::string(kStyles[style]) + "_q" + q_text, f, bloch_norm_upper(f)});
    }
  return out;
}

std::vector<RadiusSpec> makarov_radii() {
  std::vector<RadiusSpec> r{RadiusSpec::plain(1.0 - 1.0 / std::numbers::e)};
  for (int k = 2; k <= 12; ++k) r.push_back(RadiusSpec::plain(1.0 - std::pow(10.0, -0.5 * k)));
  return r;
}

std::vector<RadiusSpec> growth_radii() {
  std::vector<RadiusSpec> r;
  for (int k = 1; k <= 10; ++k) r.push_back(RadiusSpec::plain(0.095 * k - 0.045));
  for (int k = 1; k <= 6; ++k) r.push_back(RadiusSpec::plain(1.0 - std::pow(10.0, -1.0 - 0.5 * k)));
  for (int k = 2; k <= 49; ++k) r.push_back(RadiusSpec::one_minus_pow3(k));
  std::sort(r.begin(), r.end(), radius_less);
  return r;
}

std::vector<double> default_c_grid() {
  std::vector<double> xs;
  for (int k = 1; k <= 12; ++k) xs.push_back(0.1 * k);
  return xs;
}

std::vector<AlphaBranch> eight_branches(int depth) {
  std::vector<AlphaBranch> out;
  for (int k = 0; k < 8; ++k) out.push_back({(k + 0.5) / 8.0, depth});
  return out;
}

std::vector<CorpusEntry> generator_corpus(const ExponentTable& depth24, const ExponentTable& single63) {
  auto out = makarov_corpus();
  for (int s = 1; s <= 6; ++s) {
    const auto b = SparseSeries::pow3_block(s);
    out.push_back({"block_s" + std::to_string(s), b, bloch_norm_upper(b)});
  }
  const auto f13 = thm13_functions(depth24, {1, 2, 3, 4}, depth24.n_max);
  for (std::size_t k = 0; k < f13.functions.size(); ++k)
    out.push_back({"thm13_" + f13.labels[k], f13.functions[k], bloch_norm_upper(f13.functions[k])});
  const auto f14 = thm14_functions(eight_branches(5), single63);
  for (std::size_t k = 0; k < f14.functions.size(); ++k)
    out.push_back({"thm14_" + f14.labels[k], f14.functions[k], bloch_norm_upper(f14.functions[k])});
  return out;
}

}  // namespace lacunary
