#include "lacunary/seq.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

namespace lacunary {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kLn3 = 1.09861228866810969140;

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// -log(1 - 1/n) as an extended float
XFloat neg_log1m_inv(const BigInt& n) {
  if (n < (BigInt(1) << 40)) {
    const double x = 1.0 / static_cast<double>(n);
    return XFloat(-std::log1p(-x));
  }
  const XFloat x = XFloat(1.0) / XFloat(n);
  return x * (XFloat(1.0) + x * XFloat(0.5));
}

// log U_a(r_b) with r_b = sqrt(1 - 1/b): log a - log b + (a - 1)/2 log(1 - 1/b)
double direct_log_u(const BigInt& a, const BigInt& b) {
  const XFloat damp = XFloat(BigInt(a - 1)) * XFloat(0.5) * neg_log1m_inv(b);
  return log_big(a) - log_big(b) - damp.to_double();
}

}  // namespace

// ---------------------------------------------------------------- exponent table

const ExponentEntry& ExponentTable::entry(int n, int i) const {
  if (!contains(n, i)) throw std::out_of_range("no entry s(" + std::to_string(n) + "," + std::to_string(i) + ")");
  // rows before n hold sum_{m<n} min(m, columns) entries
  std::size_t idx = 0;
  for (int m = 1; m < n; ++m) idx += static_cast<std::size_t>(width(m));
  return entries.at(idx + static_cast<std::size_t>(i - 1));
}

ExponentTable build_lemma21(int n_max, const BigInt& seed_start, int columns) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (columns < 0) columns = n_max;
  if (columns < 1 || columns > n_max) throw std::invalid_argument("columns must lie in [1, n_max]");
  if (seed_start < 2) throw std::invalid_argument("seed_start must be >= 2");

  ExponentTable t;
  t.n_max = n_max;
  t.columns = columns;
  t.seed_start = seed_start;
  std::vector<RadiusSpec> radii;
  constexpr double kSlack = 1e-9;  // keep a visible gap so the check is robust to rounding

  for (int n = 1; n <= n_max; ++n) {
    for (int i = 1; i <= std::min(n, columns); ++i) {
      BigInt cand = seed_start;
      if (!t.entries.empty()) cand = std::max(cand, BigInt(t.entries.back().s + 1));
      if (i <= std::min(n - 1, columns)) cand = std::max(cand, BigInt(2 * t.s(n - 1, i)));
      ExponentEntry e{n, i, cand, cand, 0};
      for (;;) {
        const auto r_new = RadiusSpec::sqrt_complement(e.s);
        bool ok = true;
        for (std::size_t k = t.entries.size(); k-- > 0 && ok;) {
          const auto& p = t.entries[k];
          const double bound = -(n + p.n) * kLn2 - kSlack;
          ok = log_u_func(BigExponent(e.s), radii[k]) < bound && log_u_func(BigExponent(p.s), r_new) < bound;
        }
        if (ok) {
          radii.push_back(r_new);
          break;
        }
        e.s *= 2;
        ++e.retries;
      }
      t.entries.push_back(std::move(e));
    }
  }
  return t;
}

Lemma21Report verify_lemma21(const ExponentTable& t) {
  Lemma21Report rep;
  rep.worst_iii_log_margin = std::numeric_limits<double>::infinity();
  auto fail = [&](char c, int n, int i, int n2, int i2, double v) {
    rep.pass = false;
    rep.violations.push_back({c, n, i, n2, i2, v});
  };

  // index the stored entries by position, independent of the builder's layout
  std::map<std::pair<int, int>, const ExponentEntry*> by_pos;
  for (const auto& e : t.entries) by_pos[{e.n, e.i}] = &e;
  std::vector<const ExponentEntry*> order;
  for (int n = 1; n <= t.n_max; ++n)
    for (int i = 1; i <= std::min(n, t.columns); ++i) {
      auto it = by_pos.find({n, i});
      if (it == by_pos.end()) {
        fail('1', n, i, 0, 0, 0.0);
        continue;
      }
      order.push_back(it->second);
    }
  if (order.empty()) return rep;

  // (i) strict increase in lexicographic order, starting above 1
  ++rep.checks_i;
  if (!(order.front()->s > 1)) fail('1', order.front()->n, order.front()->i, 0, 0, 0.0);
  for (std::size_t k = 1; k < order.size(); ++k) {
    ++rep.checks_i;
    if (!(order[k]->s > order[k - 1]->s))
      fail('1', order[k]->n, order[k]->i, order[k - 1]->n, order[k - 1]->i, 0.0);
  }

  // (ii) column doubling, exact integer comparison
  for (const auto* e : order) {
    auto next = by_pos.find({e->n + 1, e->i});
    if (next == by_pos.end()) continue;
    ++rep.checks_ii;
    if (next->second->s < 2 * e->s)
      fail('2', e->n, e->i, e->n + 1, e->i, (XFloat(next->second->s) / XFloat(e->s)).to_double());
  }

  // (iii) every ordered pair
  for (const auto* a : order) {
    for (const auto* b : order) {
      if (a == b) continue;
      ++rep.checks_iii;
      const double margin = -(a->n + b->n) * kLn2 - direct_log_u(a->s, b->s);
      rep.worst_iii_log_margin = std::min(rep.worst_iii_log_margin, margin);
      if (!(margin > 0)) fail('3', a->n, a->i, b->n, b->i, -margin);
    }
  }
  return rep;
}

// ---------------------------------------------------------------- binary branches

std::vector<int> alpha_digits(const AlphaBranch& b) {
  if (!(b.alpha >= 0.0 && b.alpha <= 1.0)) throw std::domain_error("alpha must lie in [0, 1]");
  if (b.depth < 0) throw std::invalid_argument("depth must be >= 0");
  std::vector<int> d(static_cast<std::size_t>(b.depth));
  if (b.alpha == 1.0) {
    std::fill(d.begin(), d.end(), 1);
    return d;
  }
  double x = b.alpha;  // doubling is exact in binary floating point
  for (auto& digit : d) {
    x *= 2.0;
    digit = x >= 1.0 ? 1 : 0;
    x -= digit;
  }
  return d;
}

std::vector<BigInt> alpha_set(const AlphaBranch& b) {
  const auto d = alpha_digits(b);
  std::vector<BigInt> out;
  out.reserve(d.size());
  BigInt prefix = 0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    prefix = 2 * prefix + d[k];
    out.push_back((BigInt(1) << static_cast<unsigned>(k + 1)) + prefix);
  }
  return out;
}

int divergence_depth(const AlphaBranch& a, const AlphaBranch& b) {
  const int depth = std::min(a.depth, b.depth);
  const auto da = alpha_digits({a.alpha, depth});
  const auto db = alpha_digits({b.alpha, depth});
  for (int k = 0; k < depth; ++k)
    if (da[k] != db[k]) return k + 1;
  return depth + 1;
}

std::vector<BigInt> alpha_residual(const AlphaBranch& a0, const std::vector<AlphaBranch>& others) {
  std::vector<BigInt> out = alpha_set(a0);
  for (const auto& o : others) {
    const auto s = alpha_set(o);
    std::vector<BigInt> keep;
    std::set_difference(out.begin(), out.end(), s.begin(), s.end(), std::back_inserter(keep));
    out = std::move(keep);
  }
  return out;
}

// ---------------------------------------------------------------- block table

std::string profile_name(ConstantProfile p) { return p == ConstantProfile::Literal ? "literal" : "relaxed"; }

ConstantProfile parse_profile(const std::string& s) {
  if (s == "literal") return ConstantProfile::Literal;
  if (s == "relaxed") return ConstantProfile::Relaxed;
  throw std::invalid_argument("unknown profile '" + s + "' (expected literal or relaxed)");
}

double delta_coeff(int j, double c_hat) {
  if (j < 1) throw std::invalid_argument("delta_j needs j >= 1");
  if (!(c_hat > 0)) throw std::invalid_argument("delta_j needs c > 0");
  return 512.0 * std::sqrt(c_hat / j);
}

BigInt block_floor(int j, ConstantProfile p) {
  if (p == ConstantProfile::Literal) return BigInt(1) << static_cast<unsigned>(4 * j + 4);
  return BigInt(4 * j + 4);
}

const BlockEntry& BlockTable::entry(int i, int j) const {
  if (!contains(i, j)) throw std::out_of_range("no block (" + std::to_string(i) + "," + std::to_string(j) + ")");
  const std::size_t idx = static_cast<std::size_t>((j - 1) * j / 2 + (i - 1));
  return entries.at(idx);
}

XFloat block_xfunc(const BigInt& s, const RadiusSpec& r) {
  return pow3_block_power_sum(s, r, 1.0) / r.log_inv_gap().sqrt();
}

XFloat block_xfunc(int i, int j, const BlockTable& t, const RadiusSpec& r) {
  return block_xfunc(t.entry(i, j).s, r);
}

XFloat prop37_damping_bound(int i, int j, int i2, int j2, double c_hat) {
  return XFloat::from_log(-std::log(delta_coeff(j, c_hat)) - (i + i2 + j + 2 * j2 + 2) * kLn2);
}

double block_threshold(const BigInt& s, int j, double c_hat) {
  const XFloat l = XFloat(2.0 * kLn3) * XFloat(s);
  return (l.sqrt() * XFloat(1.0 / std::sqrt(c_hat * std::ldexp(1.0, j + 6)))).to_double();
}

std::uint64_t block_stream_seed(std::uint64_t seed, int i, int j) {
  return mix(mix(seed) ^ mix((static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint32_t>(j)));
}

namespace {

MeasureCertificate certificate(std::uint64_t samples, std::uint64_t hits, int j) {
  MeasureCertificate c;
  c.samples = samples;
  c.hits = hits;
  c.evaluated = true;
  c.measure = static_cast<double>(hits) / static_cast<double>(samples);
  const double var = c.measure * (1.0 - c.measure) + 1.0 / static_cast<double>(samples);
  c.lower = c.measure - 3.0 * std::sqrt(var / static_cast<double>(samples));
  c.target = 1.0 - std::ldexp(1.0, -(j + 5));
  c.pass = c.lower >= c.target;
  return c;
}

bool over_budget(const BigInt& s, std::uint64_t samples, std::uint64_t budget) {
  return BigInt(s + 1) * samples > budget;
}

}  // namespace

MeasureCertificate block_measure(const BigInt& s, int j, double c_hat, std::uint64_t samples, std::uint64_t seed,
                                 std::uint64_t work_budget) {
  MeasureCertificate none;
  none.samples = samples;
  none.target = 1.0 - std::ldexp(1.0, -(j + 5));
  if (samples == 0 || over_budget(s, samples, work_budget)) return none;

  const auto terms = static_cast<std::size_t>(s) + 1;
  constexpr std::size_t kGuard = 40;  // digits past the last term; 3^-40 of angle error
  // weights r^{3^m}, m = s + k, with r = 1 - 3^{-2s}
  const auto r = RadiusSpec::one_minus_pow3(2 * s);
  std::vector<double> weight(terms);
  for (std::size_t k = 0; k < terms; ++k) weight[k] = std::exp(radial_power(BigExponent::pow3(static_cast<std::int64_t>(s) + static_cast<std::int64_t>(k)), r));
  const double thr = block_threshold(s, j, c_hat);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  constexpr std::uint64_t kPow40 = 12157665459056928801ULL;  // 3^40
  std::vector<std::uint8_t> digits(terms + kGuard);
  std::uint64_t hits = 0;
  for (std::uint64_t n = 0; n < samples; ++n) {
    for (std::size_t pos = 0; pos < digits.size();) {
      std::uint64_t u = rng();
      if (u >= kPow40) continue;
      for (int q = 0; q < 40 && pos < digits.size(); ++q, ++pos) {
        digits[pos] = static_cast<std::uint8_t>(u % 3);
        u /= 3;
      }
    }
    // phi_k = {3^k psi} with psi = 0.d_1 d_2 ... in base 3, built from the far end
    double phi = unif(rng);
    for (std::size_t k = digits.size(); k-- > terms;) phi = (digits[k] + phi) / 3.0;
    double re = 0.0, im = 0.0;
    for (std::size_t k = terms; k-- > 0;) {
      phi = (digits[k] + phi) / 3.0;
      // phi now holds {3^k psi}
      re += weight[k] * std::cos(2.0 * std::numbers::pi * phi);
      im += weight[k] * std::sin(2.0 * std::numbers::pi * phi);
    }
    if (std::hypot(re, im) >= thr) ++hits;
  }
  return certificate(samples, hits, j);
}

double block_measure_limit(const BigInt& s, int j, double c_hat) {
  const auto r = RadiusSpec::one_minus_pow3(2 * s);
  // C^2 = (1/2) sum r^{2 3^m}
  const XFloat c2 = pow3_block_power_sum(s, r, 2.0) * XFloat(0.5);
  const XFloat thr2 = XFloat(2.0 * kLn3 / (c_hat * std::ldexp(1.0, j + 6))) * XFloat(s);
  return std::exp(-0.5 * (thr2 / c2).to_double());
}

BlockTable build_prop37(int j_max, ConstantProfile profile, double c_hat, const Prop37Options& opt) {
  if (j_max < 1) throw std::invalid_argument("j_max must be >= 1");
  if (!(c_hat > 0)) throw std::invalid_argument("c_hat must be > 0");
  BlockTable t;
  t.j_max = j_max;
  t.profile = profile;
  t.c_hat = c_hat;
  t.seed = opt.seed;
  t.mc_samples = opt.mc_samples;
  t.mc_work_budget = opt.mc_work_budget;
  std::vector<RadiusSpec> radii;

  for (int j = 1; j <= j_max; ++j) {
    for (int i = 1; i <= j; ++i) {
      BigInt cand = block_floor(j, profile) + 1;
      if (!t.entries.empty()) cand = std::max(cand, BigInt(t.entries.back().s + 1));
      for (const auto& p : t.entries)
        if (p.i < i && p.j < j) cand = std::max(cand, BigInt(p.s + 1));
      BlockEntry e{i, j, cand, cand, 0, {}};
      for (;; e.s *= 2, ++e.retries) {
        if (e.retries > (1 << 22))
          throw std::runtime_error("block (" + std::to_string(i) + "," + std::to_string(j) + ") did not settle");
        const auto r_new = RadiusSpec::one_minus_pow3(2 * e.s);
        bool ok = true;
        for (std::size_t k = t.entries.size(); k-- > 0 && ok;) {
          const auto& p = t.entries[k];
          ok = block_xfunc(e.s, radii[k]) <= prop37_damping_bound(i, j, p.i, p.j, c_hat) &&
               block_xfunc(p.s, r_new) <= prop37_damping_bound(p.i, p.j, i, j, c_hat);
        }
        if (!ok) continue;
        e.measure = block_measure(e.s, j, c_hat, opt.mc_samples, block_stream_seed(opt.seed, i, j) + e.retries,
                                  opt.mc_work_budget);
        if (e.measure.evaluated && !e.measure.pass) {
          if (e.retries >= opt.max_retries)
            throw std::runtime_error("measure condition for block (" + std::to_string(i) + "," + std::to_string(j) +
                                     ") not met within the retry budget; c_hat may be too small");
          continue;
        }
        radii.push_back(r_new);
        break;
      }
      e.limit_measure = block_measure_limit(e.s, j, c_hat);
      t.entries.push_back(std::move(e));
    }
  }
  return t;
}

namespace {

// upper bound for sum_{m=a}^{2a} r^{3^m}, r = 1 - 3^{-k}, evaluated term by term around m = k
XFloat verifier_block_sum(const BigInt& a, const BigInt& k) {
  // mu = -3^k log(1 - 3^-k) lies in [1, 1.5]
  const double mu = k <= 30 ? -std::log1p(-std::pow(3.0, -static_cast<double>(k))) * std::pow(3.0, static_cast<double>(k)) : 1.0;
  const BigInt lo = a, hi = 2 * a;
  XFloat sum;
  // terms with m <= k - 70 are at most 1
  const BigInt ones_hi = std::min(hi, BigInt(k - 70));
  if (ones_hi >= lo) sum += XFloat(BigInt(ones_hi - lo + 1));
  // terms with m >= k + 12 are at most exp(-3^12)
  const BigInt tiny_lo = std::max(lo, BigInt(k + 12));
  if (hi >= tiny_lo) sum += XFloat(BigInt(hi - tiny_lo + 1)) * XFloat::from_log(-std::pow(3.0, 12));
  const BigInt mid_lo = std::max(lo, BigInt(k - 69)), mid_hi = std::min(hi, BigInt(k + 11));
  for (BigInt m = mid_lo; m <= mid_hi; ++m) {
    const double d = static_cast<double>(static_cast<long>(BigInt(m - k)));
    sum += XFloat(std::exp(-mu * std::pow(3.0, d)));
  }
  return sum;
}

// m(E) on random points of the 2^64-th roots of unity: the angle of zeta^{3^m} is 3^m u / 2^64
MeasureCertificate verifier_measure(const BigInt& s, int j, double c_hat, std::uint64_t samples,
                                    std::uint64_t seed) {
  const auto terms = static_cast<std::size_t>(s) + 1;
  const double k = 2.0 * static_cast<double>(s);
  std::vector<double> weight(terms);
  for (std::size_t q = 0; q < terms; ++q) {
    const double d = static_cast<double>(q) - static_cast<double>(s);  // m - 2s
    const double mu = k <= 30 ? -std::log1p(-std::pow(3.0, -k)) * std::pow(3.0, k) : 1.0;
    weight[q] = std::exp(-mu * std::pow(3.0, d));
  }
  const double thr = std::sqrt(2.0 * static_cast<double>(s) * kLn3 / (c_hat * std::ldexp(1.0, j + 6)));
  std::uint64_t pow3s = 1;
  for (std::size_t q = 0; q < static_cast<std::size_t>(s); ++q) pow3s *= 3;  // wraps mod 2^64
  std::mt19937_64 rng(seed);
  std::uint64_t hits = 0;
  constexpr double kScale = 2.0 * std::numbers::pi / 18446744073709551616.0;
  for (std::uint64_t n = 0; n < samples; ++n) {
    std::uint64_t angle = rng() * pow3s;
    double re = 0.0, im = 0.0;
    for (std::size_t q = 0; q < terms; ++q) {
      const double a = static_cast<double>(angle) * kScale;
      re += weight[q] * std::cos(a);
      im += weight[q] * std::sin(a);
      angle *= 3;
    }
    if (re * re + im * im >= thr * thr) ++hits;
  }
  return certificate(samples, hits, j);
}

}  // namespace

Prop37Report verify_prop37(const BlockTable& t) {
  Prop37Report rep;
  auto fail = [&](const std::string& c, int i, int j, int i2, int j2, double v) {
    rep.violations.push_back({c, i, j, i2, j2, v});
  };
  std::map<std::pair<int, int>, const BlockEntry*> by_pos;
  for (const auto& e : t.entries) by_pos[{e.i, e.j}] = &e;
  std::vector<const BlockEntry*> order;
  for (int j = 1; j <= t.j_max; ++j)
    for (int i = 1; i <= j; ++i) {
      auto it = by_pos.find({i, j});
      if (it == by_pos.end()) {
        fail("missing", i, j, 0, 0, 0.0);
        rep.deterministic_pass = false;
      } else {
        order.push_back(it->second);
      }
    }

  for (std::size_t k = 1; k < order.size(); ++k)
    if (!(order[k]->s > order[k - 1]->s)) rep.radii_increasing = false;

  for (const auto* e : order) {
    // (1.i.j)
    const BigInt floor = t.profile == ConstantProfile::Literal ? BigInt(BigInt(1) << (4 * e->j + 4)) : BigInt(4 * e->j + 4);
    if (!(e->s > floor)) {
      fail("1", e->i, e->j, 0, 0, 0.0);
      rep.deterministic_pass = false;
    }
    for (const auto* p : order)
      if (p->i < e->i && p->j < e->j && !(e->s > p->s)) {
        fail("1", e->i, e->j, p->i, p->j, 0.0);
        rep.deterministic_pass = false;
      }
    // (2.i.j) against every other block, on its radius
    const double log_delta = std::log(512.0) + 0.5 * std::log(t.c_hat / e->j);
    for (const auto* p : order) {
      if (p == e) continue;
      const BigInt k = 2 * p->s;
      const double log_x = verifier_block_sum(e->s, k).log() - 0.5 * (XFloat(k) * XFloat(kLn3)).log();
      const double log_bound = -log_delta - (e->i + p->i + e->j + 2 * p->j + 2) * kLn2;
      if (!(log_x <= log_bound + 1e-12)) {
        fail("2", e->i, e->j, p->i, p->j, log_x - log_bound);
        rep.deterministic_pass = false;
      }
    }
    // (3.i.j) with fresh randomness on a different sampler
    if (t.mc_samples == 0 || over_budget(e->s, t.mc_samples, t.mc_work_budget)) {
      ++rep.measure_uncertified;
      fail("3-uncertified", e->i, e->j, 0, 0, 0.0);
      continue;
    }
    const auto m = verifier_measure(e->s, e->j, t.c_hat, t.mc_samples, mix(block_stream_seed(t.seed, e->i, e->j)));
    if (m.pass) {
      ++rep.measure_certified;
    } else {
      ++rep.measure_failed;
      fail("3", e->i, e->j, 0, 0, m.lower);
    }
  }
  rep.pass = rep.deterministic_pass && rep.radii_increasing && rep.measure_uncertified == 0 && rep.measure_failed == 0;
  return rep;
}

}  // namespace lacunary
