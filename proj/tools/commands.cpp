#include "commands.hpp"

#include "lacunary/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <set>

namespace lacunary::cli {

namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------- config access with field diagnostics

class Config {
 public:
  Config(const Json& j, std::string command) : j_(j), command_(std::move(command)) {
    if (!j_.is_object()) errors_.push_back("config must be a JSON object");
  }

  std::int64_t integer(const std::string& key, std::int64_t def, std::int64_t lo, std::int64_t hi) {
    const Json* v = find(key);
    if (!v) return def;
    if (!v->is_number_integer()) return bad(key, "expected an integer", def);
    const auto x = v->get<std::int64_t>();
    if (x < lo || x > hi) return bad(key, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]", def);
    return x;
  }

  std::uint64_t u64(const std::string& key, std::uint64_t def, std::uint64_t lo = 0, bool power_of_two = false) {
    const Json* v = find(key);
    if (!v) return def;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0))
      return bad(key, "expected a nonnegative integer", def);
    const auto x = v->get<std::uint64_t>();
    if (x < lo) return bad(key, "must be >= " + std::to_string(lo), def);
    if (power_of_two && (x & (x - 1)) != 0) return bad(key, "must be a power of two", def);
    return x;
  }

  double real(const std::string& key, double def, double lo, double hi) {
    const Json* v = find(key);
    if (!v) return def;
    if (!v->is_number()) return bad(key, "expected a number", def);
    const double x = v->get<double>();
    if (!(x >= lo && x <= hi)) return bad(key, "must be in [" + fmt17(lo) + ", " + fmt17(hi) + "]", def);
    return x;
  }

  std::optional<double> optional_real(const std::string& key, double lo, double hi) {
    if (!find(key)) return std::nullopt;
    return real(key, 0.0, lo, hi);
  }

  bool flag(const std::string& key, bool def) {
    const Json* v = find(key);
    if (!v) return def;
    if (!v->is_boolean()) return bad(key, "expected true or false", def);
    return v->get<bool>();
  }

  std::string choice(const std::string& key, const std::string& def, const std::vector<std::string>& options) {
    const Json* v = find(key);
    if (!v) return def;
    if (!v->is_string() || std::find(options.begin(), options.end(), v->get<std::string>()) == options.end()) {
      std::string all;
      for (const auto& o : options) all += (all.empty() ? "" : "|") + o;
      return bad(key, "expected one of " + all, def);
    }
    return v->get<std::string>();
  }

  std::vector<std::int64_t> int_list(const std::string& key, std::vector<std::int64_t> def, std::int64_t lo,
                                     std::int64_t hi) {
    const Json* v = find(key);
    if (!v) return def;
    if (!v->is_array() || v->empty()) return bad(key, "expected a nonempty array of integers", def);
    std::vector<std::int64_t> out;
    for (const auto& x : *v) {
      if (!x.is_number_integer() || x.get<std::int64_t>() < lo || x.get<std::int64_t>() > hi)
        return bad(key, "entries must be integers in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]", def);
      out.push_back(x.get<std::int64_t>());
    }
    return out;
  }

  std::vector<double> real_list(const std::string& key, std::vector<double> def, double lo, double hi) {
    const Json* v = find(key);
    if (!v) return def;
    if (!v->is_array() || v->empty()) return bad(key, "expected a nonempty array of numbers", def);
    std::vector<double> out;
    for (const auto& x : *v) {
      if (!x.is_number() || !(x.get<double>() >= lo && x.get<double>() <= hi))
        return bad(key, "entries must be numbers in [" + fmt17(lo) + ", " + fmt17(hi) + "]", def);
      out.push_back(x.get<double>());
    }
    return out;
  }

  void error(const std::string& key, const std::string& msg) { errors_.push_back("field '" + key + "': " + msg); }

  /// Rejects unknown fields and reports every problem at once.
  void finish() {
    if (j_.is_object())
      for (const auto& [k, v] : j_.items())
        if (!seen_.count(k)) errors_.push_back("field '" + k + "': not used by " + command_);
    if (errors_.empty()) return;
    std::string msg = "invalid config for " + command_ + ":";
    for (const auto& e : errors_) msg += "\n  " + e;
    throw UsageError(msg);
  }

 private:
  const Json* find(const std::string& key) {
    seen_.insert(key);
    if (!j_.is_object() || !j_.contains(key)) return nullptr;
    return &j_.at(key);
  }
  template <class T>
  T bad(const std::string& key, const std::string& msg, T def) {
    error(key, msg);
    return def;
  }

  const Json& j_;
  std::string command_;
  std::set<std::string> seen_;
  std::vector<std::string> errors_;
};

// ---------------------------------------------------------------- shared pieces

std::vector<std::string> fmt_row(std::initializer_list<double> xs) {
  std::vector<std::string> out;
  for (double x : xs) out.push_back(fmt17(x));
  return out;
}

int emit(const RunContext& ctx, const std::string& name, Json inputs, Json result, bool pass,
         bool informational = false) {
  Json doc = {{"command", name}, {"inputs", std::move(inputs)}, {"config", ctx.config},
              {"pass", pass}, {"informational", informational}, {"result", std::move(result)}};
  write_atomic(ctx.out_dir / (name + ".json"), doc.dump(2) + "\n");
  std::cout << name << ": " << (informational ? "informational" : pass ? "pass" : "FAIL") << " -> "
            << (ctx.out_dir / (name + ".json")).string() << "\n";
  return informational || pass ? 0 : 1;
}

ExponentTable lemma21_table(const RunContext& ctx, int n_max, int columns, const BigInt& seed_start) {
  const auto id = lemma21_cache_id(n_max, columns, seed_start);
  try {
    return load_exponent_table(ctx.cache_dir, id);
  } catch (const CacheError& e) {
    if (e.reason() != CacheError::Reason::Missing) throw;
    if (ctx.no_build) throw UsageError("cache miss for " + id + " in " + ctx.cache_dir.string() + " and --no-build is set");
  }
  auto t = build_lemma21(n_max, seed_start, columns);
  cache_table(ctx.cache_dir, t);
  return t;
}

struct Prop37Params {
  int j_max = 4;
  ConstantProfile profile = ConstantProfile::Relaxed;
  std::optional<double> c_hat;
  Prop37Options opt;
};

Prop37Params prop37_params(Config& cfg) {
  Prop37Params p;
  p.j_max = static_cast<int>(cfg.integer("j_max", 4, 1, 8));
  p.profile = parse_profile(cfg.choice("profile", "relaxed", {"relaxed", "literal"}));
  p.c_hat = cfg.optional_real("c_hat", 0.0, 1e6);
  p.opt.seed = cfg.u64("seed", 1);
  p.opt.mc_samples = cfg.u64("mc_samples", std::uint64_t{1} << 17, 1);
  p.opt.mc_work_budget = cfg.u64("work_budget", std::uint64_t{1} << 30, 1);
  return p;
}

/// The configured constant, or the fitted one from the default block sizes.
double resolve_c_hat(const Prop37Params& p, Json& inputs) {
  if (p.c_hat) {
    inputs["c_hat_source"] = "config";
    return *p.c_hat;
  }
  const auto c = estimate_c({100, 150, 200}, default_c_grid(), std::uint64_t{1} << 17, p.opt.seed);
  inputs["c_hat_source"] = "estimate_c s=100,150,200 N=131072 seed=" + std::to_string(p.opt.seed);
  return c.value;
}

BlockTable prop37_table(const RunContext& ctx, const Prop37Params& p, double c_hat, bool force_build = false) {
  const auto id = prop37_cache_id(p.j_max, p.profile, c_hat, p.opt.seed, p.opt.mc_samples);
  if (!force_build) {
    try {
      return load_block_table(ctx.cache_dir, id);
    } catch (const CacheError& e) {
      if (e.reason() != CacheError::Reason::Missing) throw;
      if (ctx.no_build) throw UsageError("cache miss for " + id + " in " + ctx.cache_dir.string() + " and --no-build is set");
    }
  }
  auto t = build_prop37(p.j_max, p.profile, c_hat, p.opt);
  cache_table(ctx.cache_dir, t);
  return t;
}

std::size_t bits(const BigInt& s) { return s == 0 ? 0 : msb(s) + 1; }

// ---------------------------------------------------------------- build-seq / verify-seq

struct SeqParams {
  std::string kind;
  int n_max = 12, columns = 12;
  BigInt seed_start = 2;
  Prop37Params blocks;
};

SeqParams seq_params(Config& cfg) {
  SeqParams s;
  s.kind = cfg.choice("kind", "lemma21", {"lemma21", "prop37"});
  s.n_max = static_cast<int>(cfg.integer("n_max", 12, 1, 128));
  s.columns = static_cast<int>(cfg.integer("columns", s.n_max, 1, 128));
  s.seed_start = cfg.integer("seed_start", 2, 2, std::int64_t{1} << 62);
  s.blocks = prop37_params(cfg);
  return s;
}

Json lemma21_summary(const ExponentTable& t) {
  Json e = Json::array();
  for (const auto& x : t.entries) e.push_back({{"n", x.n}, {"i", x.i}, {"bits", bits(x.s)}, {"retries", x.retries}});
  return e;
}

Json prop37_summary(const BlockTable& t) {
  Json e = Json::array();
  for (const auto& x : t.entries)
    e.push_back({{"i", x.i}, {"j", x.j}, {"s_bits", bits(x.s)}, {"retries", x.retries},
                 {"measure", num(x.measure.measure)}, {"lower", num(x.measure.lower)},
                 {"target", num(x.measure.target)}, {"evaluated", x.measure.evaluated},
                 {"limit_measure", num(x.limit_measure)}});
  return e;
}

void write_entries_csv(const RunContext& ctx, const std::string& name, const ExponentTable& t) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& x : t.entries)
    rows.push_back({std::to_string(x.n), std::to_string(x.i), std::to_string(bits(x.s)), std::to_string(x.retries),
                    to_decimal(x.s)});
  write_csv(ctx.out_dir / (name + ".csv"), {"n", "i", "bits", "retries", "s"}, rows);
}

void write_blocks_csv(const RunContext& ctx, const std::string& name, const BlockTable& t) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& x : t.entries)
    rows.push_back({std::to_string(x.i), std::to_string(x.j), std::to_string(bits(x.s)), std::to_string(x.retries),
                    fmt17(x.measure.measure), fmt17(x.measure.lower), fmt17(x.measure.target),
                    x.measure.evaluated ? "1" : "0", fmt17(x.limit_measure), to_decimal(x.s)});
  write_csv(ctx.out_dir / (name + ".csv"),
            {"i", "j", "bits", "retries", "measure", "lower", "target", "evaluated", "limit_measure", "s"}, rows);
}

int build_seq(const RunContext& ctx) {
  Config cfg(ctx.config, "build-seq");
  const auto p = seq_params(cfg);
  cfg.finish();
  Json inputs = {{"kind", p.kind}};
  if (p.kind == "lemma21") {
    const auto t = build_lemma21(p.n_max, p.seed_start, p.columns);
    const auto path = cache_table(ctx.cache_dir, t);
    inputs["table"] = cache_id(t);
    write_entries_csv(ctx, "build-seq", t);
    return emit(ctx, "build-seq", inputs, {{"cache_file", path.filename().string()}, {"entries", lemma21_summary(t)}}, true);
  }
  const double c = resolve_c_hat(p.blocks, inputs);
  const auto t = prop37_table(ctx, p.blocks, c, true);
  inputs["table"] = cache_id(t);
  inputs["profile"] = profile_name(t.profile);
  inputs["seed"] = t.seed;
  inputs["N"] = t.mc_samples;
  write_blocks_csv(ctx, "build-seq", t);
  return emit(ctx, "build-seq", inputs, {{"c_hat", num(c)}, {"entries", prop37_summary(t)}}, true);
}

int verify_seq(const RunContext& ctx) {
  Config cfg(ctx.config, "verify-seq");
  const auto p = seq_params(cfg);
  cfg.finish();
  Json inputs = {{"kind", p.kind}};
  if (p.kind == "lemma21") {
    const auto t = lemma21_table(ctx, p.n_max, p.columns, p.seed_start);
    inputs["table"] = cache_id(t);
    const auto rep = verify_lemma21(t);
    return emit(ctx, "verify-seq", inputs, {{"entries", t.entries.size()}, {"report", to_json(rep)}}, rep.pass);
  }
  const double c = resolve_c_hat(p.blocks, inputs);
  const auto t = prop37_table(ctx, p.blocks, c);
  inputs["table"] = cache_id(t);
  inputs["profile"] = profile_name(t.profile);
  inputs["seed"] = t.seed;
  inputs["N"] = t.mc_samples;
  const auto rep = verify_prop37(t);
  write_blocks_csv(ctx, "verify-seq", t);
  return emit(ctx, "verify-seq", inputs, {{"c_hat", num(c)}, {"entries", prop37_summary(t)}, {"report", to_json(rep)}},
              rep.pass);
}

// ---------------------------------------------------------------- stochastic commands

int sz_test(const RunContext& ctx) {
  Config cfg(ctx.config, "sz-test");
  const auto s_list = cfg.int_list("s_list", {25, 50, 100, 200}, 1, 5000);
  const auto n = cfg.u64("samples", std::uint64_t{1} << 17, 2, true);
  const auto seed = cfg.u64("seed", 1);
  const double threshold = cfg.real("threshold", 0.05, 0.0, 1.0);
  const double noise = cfg.real("noise", 0.01, 0.0, 1.0);
  cfg.finish();

  Json per = Json::array();
  std::vector<std::vector<std::string>> rows;
  std::vector<double> dist;
  SzSample last;
  for (auto s : s_list) {
    auto sample = sz_empirical_cdf(s, n, seed);
    const double d = sample.cdf.kolmogorov(rayleigh_cdf);
    dist.push_back(d);
    per.push_back({{"s", s}, {"distance", num(d)}, {"normalization", num(sample.c)}, {"above_threshold", d > threshold}});
    rows.push_back({std::to_string(s), fmt17(d)});
    last = std::move(sample);
  }
  bool monotone = true;
  for (std::size_t k = 1; k < dist.size(); ++k) monotone = monotone && dist[k] <= dist[k - 1] + noise;
  write_csv(ctx.out_dir / "sz-test.csv", {"s", "distance"}, rows);

  PlotSeries emp{"empirical s=" + std::to_string(last.s), {}, {}}, ray{"Rayleigh", {}, {}};
  std::vector<std::vector<std::string>> cdf_rows;
  for (int k = 0; k <= 200; ++k) {
    const double x = 0.02 * k;
    emp.x.push_back(x);
    emp.y.push_back(last.cdf(x));
    ray.x.push_back(x);
    ray.y.push_back(rayleigh_cdf(x));
    cdf_rows.push_back(fmt_row({x, last.cdf(x), rayleigh_cdf(x)}));
  }
  write_csv(ctx.out_dir / "sz-cdf.csv", {"x", "empirical", "rayleigh"}, cdf_rows);
  write_atomic(ctx.out_dir / "sz-cdf.svg", svg_plot("normalized block modulus", "x", "CDF", {emp, ray}));

  const bool within = dist.back() <= threshold;
  return emit(ctx, "sz-test", {{"s_list", s_list}, {"N", n}, {"seed", seed}},
              {{"per_s", per}, {"largest_s_within_threshold", within}, {"nonincreasing_within_noise", monotone}},
              within && monotone, true);
}

int lemma35(const RunContext& ctx) {
  Config cfg(ctx.config, "lemma35");
  const auto s_list = cfg.int_list("s_list", {10, 20, 50, 100, 200}, 1, std::int64_t{1} << 40);
  const double lo = cfg.real("lower", 0.128, 0.0, 10.0);
  const double hi = cfg.real("upper", 1.05, 0.0, 10.0);
  cfg.finish();
  Json per = Json::array();
  bool pass = true;
  for (auto s : s_list) {
    const auto r = lemma35_check(s);
    const bool window = r.ratio >= lo && r.ratio <= hi;
    pass = pass && r.pass && window;
    auto j = to_json(r);
    j["in_window"] = window;
    per.push_back(j);
  }
  return emit(ctx, "lemma35", {{"s_list", s_list}, {"window", {num(lo), num(hi)}}}, {{"per_s", per}}, pass);
}

int estimate_c_cmd(const RunContext& ctx) {
  Config cfg(ctx.config, "estimate-c");
  const auto s_list = cfg.int_list("s_list", {100, 150, 200}, 1, 5000);
  const auto grid = cfg.real_list("x_grid", default_c_grid(), 1e-6, 100.0);
  const auto n = cfg.u64("samples", std::uint64_t{1} << 17, 2, true);
  const auto seed = cfg.u64("seed", 1);
  const auto s36 = cfg.integer("lemma36_s", 200, 1, 5000);
  const auto j_list = cfg.int_list("j_list", {1, 2, 3}, 1, 20);
  cfg.finish();
  Json inputs = {{"s_list", s_list}, {"N", n}, {"seed", seed}};
  CHat c;
  try {
    c = estimate_c(s_list, grid, n, seed);
  } catch (const std::exception& e) {
    return emit(ctx, "estimate-c", inputs, {{"error", e.what()}}, false);
  }
  Json l36 = Json::array();
  bool pass = c.in_window && c.stable;
  for (auto j : j_list) {
    const double x = std::sqrt(1.0 / (c.value * std::ldexp(1.0, static_cast<int>(j) + 6)));
    const double eps = std::ldexp(1.0, -static_cast<int>(j) - 6);
    const auto r = lemma36_check(s36, {x}, eps, c.value, n, seed);
    pass = pass && r.pass;
    auto jr = to_json(r);
    jr["j"] = j;
    l36.push_back(jr);
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : c.points)
    rows.push_back({std::to_string(p.s), fmt17(p.x), fmt17(p.tail), fmt17(p.c_point), p.used ? "1" : "0"});
  write_csv(ctx.out_dir / "estimate-c.csv", {"s", "x", "tail", "c_point", "used"}, rows);
  return emit(ctx, "estimate-c", inputs, {{"fit", to_json(c)}, {"lemma36", l36}}, pass);
}

// ---------------------------------------------------------------- Bloch-analysis corpus

int makarov_test(const RunContext& ctx) {
  Config cfg(ctx.config, "makarov-test");
  const auto n = cfg.u64("samples", std::uint64_t{1} << 16, 1);
  const double tol = cfg.real("tolerance", 0.02, 0.0, 1.0);
  const auto moments = cfg.int_list("moments", {1, 2, 4, 8}, 1, 64);
  const bool growth = cfg.flag("growth", true);
  const auto growth_n = cfg.u64("growth_samples", 1024, 1);
  const auto seed = cfg.u64("seed", 1);
  cfg.finish();

  const auto corpus = makarov_corpus(seed);
  double worst = 0.0, worst_moment_margin = std::numeric_limits<double>::infinity();
  bool pass = true;
  std::vector<std::vector<std::string>> rows;
  Json fails = Json::array();
  for (const auto& c : corpus)
    for (const auto& r : makarov_radii()) {
      const auto rep = makarov_exp_check(c.f, c.norm_upper, r, n, tol);
      worst = std::max(worst, rep.lhs);
      rows.push_back({c.label, r.describe(), fmt17(r.log_inv_gap().to_double()), fmt17(rep.lhs), fmt17(rep.rhs)});
      if (!rep.pass) fails.push_back({{"series", c.label}, {"report", to_json(rep)}});
      pass = pass && rep.pass;
      for (auto m : moments) {
        const auto mr = makarov_moment_check(c.f, c.norm_upper, r, static_cast<int>(m), n, tol);
        worst_moment_margin = std::min(worst_moment_margin, mr.margin);
        if (!mr.pass) fails.push_back({{"series", c.label}, {"report", to_json(mr)}});
        pass = pass && mr.pass;
      }
    }
  write_csv(ctx.out_dir / "makarov-test.csv", {"series", "radius", "log_inv_gap", "exp_mean", "bound"}, rows);
  Json result = {{"series", corpus.size()}, {"radii", makarov_radii().size()}, {"worst_exp_mean", num(worst)},
                 {"worst_moment_margin", num(worst_moment_margin)}, {"failures", fails}};
  Json inputs = {{"N", n}, {"seed", seed}, {"tolerance", num(tol)}};

  if (growth) {
    const auto t24 = lemma21_table(ctx, 24, 24, 2);
    const auto t63 = lemma21_table(ctx, 63, 1, 2);
    inputs["tables"] = {cache_id(t24), cache_id(t63)};
    const auto gen = generator_corpus(t24, t63);
    Json per = Json::array();
    std::size_t violations = 0, points = 0;
    for (const auto& c : gen) {
      const auto g = growth_bound_check(c.f, c.norm_upper, growth_radii(), growth_n);
      violations += g.violations.size();
      points += g.points;
      per.push_back({{"series", c.label}, {"norm_upper", num(c.norm_upper)}, {"max_ratio", num(g.max_ratio)},
                     {"violations", g.violations.size()}});
    }
    pass = pass && violations == 0;
    result["growth"] = {{"radii", growth_radii().size()}, {"N", growth_n}, {"points", points},
                        {"violations", violations}, {"per_series", per}};
  }
  return emit(ctx, "makarov-test", inputs, result, pass);
}

// ---------------------------------------------------------------- separation

int separation(const RunContext& ctx) {
  Config cfg(ctx.config, "separation");
  const auto variant = cfg.choice("variant", "thm13", {"thm13", "thm14"});
  const int n_max = static_cast<int>(cfg.integer("n_max", 24, 2, 64));
  const int trials = static_cast<int>(cfg.integer("trials", 100, 1, 100000));
  const int max_members = static_cast<int>(cfg.integer("max_members", 3, 0, 7));
  const int degree = static_cast<int>(cfg.integer("degree", 8, 0, 64));
  const auto n = cfg.u64("samples", 1024, 1);
  const auto seed = cfg.u64("seed", 1);
  const double threshold = cfg.real("threshold", 0.55, 0.0, 10.0);
  const double p0_zero = cfg.real("p0_at_zero", 1.0, 0.0, 1e6);
  const int depth_k = static_cast<int>(cfg.integer("depth_k", 64, 1, 4096));
  const int table_depth = static_cast<int>(cfg.integer("table_depth", 5, 1, 6));
  const double u_n = cfg.real("u_limit_n", 1e6, 2.0, 1e18);
  cfg.finish();

  // U_n(r_n) against 1/sqrt(e)
  const BigExponent un(static_cast<std::uint64_t>(u_n));
  const double u_value = u_func(un, r_opt(un));
  const double u_err = std::abs(u_value - std::exp(-0.5));
  Json result = {{"u_limit", {{"n", to_json(un)}, {"value", num(u_value)}, {"error", num(u_err)}, {"pass", u_err < 1e-5}}}};
  bool pass = u_err < 1e-5;

  std::mt19937_64 rng(seed);
  GeneratorFamily fam;
  std::vector<int> rows;
  int other_count = 0;
  Json inputs = {{"variant", variant}, {"N", n}, {"seed", seed}, {"trials", trials}};
  if (variant == "thm13") {
    if (max_members + 1 > n_max) throw UsageError("field 'max_members': needs n_max > max_members");
    const auto t = lemma21_table(ctx, n_max, n_max, 2);
    inputs["table"] = cache_id(t);
    std::vector<int> cols;
    for (int i = 1; i <= max_members + 1; ++i) cols.push_back(i);
    fam = thm13_functions(t, cols, n_max);
    rows = fam.rows[0];
    other_count = max_members;
  } else {
    const int code_max = (1 << (table_depth + 1)) - 1;
    const auto t = lemma21_table(ctx, code_max, 1, 2);
    inputs["table"] = cache_id(t);
    const auto deep = eight_branches(depth_k);
    const std::vector<AlphaBranch> deep_others(deep.begin() + 1, deep.end());
    int d_max = 0;
    for (std::size_t a = 0; a < deep.size(); ++a)
      for (std::size_t b = 0; b < a; ++b) d_max = std::max(d_max, divergence_depth(deep[a], deep[b]));
    const auto res_k = alpha_residual(deep[0], deep_others);
    const bool count_ok = !res_k.empty() && static_cast<int>(res_k.size()) >= depth_k - d_max;
    pass = pass && count_ok;
    result["residual"] = {{"depth", depth_k}, {"size", res_k.size()}, {"d_max", d_max}, {"pass", count_ok}};

    const auto shallow = eight_branches(table_depth);
    fam = thm14_functions(shallow, t);
    const std::vector<AlphaBranch> others(shallow.begin() + 1, shallow.end());
    for (const auto& code : alpha_residual(shallow[0], others)) rows.push_back(static_cast<int>(code));
    if (rows.empty()) throw UsageError("field 'table_depth': no residual block within the table");
    other_count = 7;
  }
  inputs["rows"] = rows;

  std::vector<std::vector<std::string>> csv;
  std::vector<double> min_ratio(rows.size(), std::numeric_limits<double>::infinity());
  Json per_trial = Json::array();
  int inconsistent = 0, below = 0, vacuous = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const int m = static_cast<int>(rng() % (std::min(max_members, other_count) + 1));
    std::vector<std::size_t> members{0};
    std::vector<std::size_t> pool;
    for (int k = 1; k <= other_count; ++k) pool.push_back(static_cast<std::size_t>(k));
    std::shuffle(pool.begin(), pool.end(), rng);
    members.insert(members.end(), pool.begin(), pool.begin() + m);
    std::sort(members.begin() + 1, members.end());

    std::vector<DensePolynomial> p;
    auto c0 = random_polynomial(rng, static_cast<int>(rng() % (degree + 1))).coeffs();
    if (variant == "thm14") {
      c0.insert(c0.begin(), p0_zero);  // p_0 = p0_at_zero + z q
      p.emplace_back(c0);
    } else if (p0_zero == 0.0) {
      c0[0] = 0.0;
      p.emplace_back(c0);
    } else {
      p.push_back(normalize_at_zero(DensePolynomial(c0)).scaled(p0_zero));
    }
    for (int k = 0; k < m; ++k) p.push_back(random_polynomial(rng, static_cast<int>(rng() % (degree + 1))));

    Json deepest;
    for (std::size_t b = 0; b < rows.size(); ++b) {
      const auto& fterms = fam.functions[0].terms();
      const auto it = std::find(fam.rows[0].begin(), fam.rows[0].end(), rows[b]);
      const auto rep = separation_lower_bound(fam, members, p, fterms[it - fam.rows[0].begin()].exponent, n);
      if (!rep.consistent) ++inconsistent;
      if (!rep.vacuous) min_ratio[b] = std::min(min_ratio[b], rep.ratio);
      csv.push_back({std::to_string(trial), std::to_string(rows[b]), std::to_string(m), fmt17(rep.ratio),
                     fmt17(rep.lhs), fmt17(rep.main_term), fmt17(rep.error_budget), fmt17(rep.dyadic_budget),
                     rep.consistent ? "1" : "0"});
      if (b + 1 == rows.size()) {
        if (rep.vacuous) ++vacuous;
        else if (rep.ratio < threshold) ++below;
        deepest = to_json(rep);
      }
    }
    Json degs = Json::array();
    for (const auto& q : p) degs.push_back(q.degree());
    per_trial.push_back({{"trial", trial}, {"members", members}, {"degrees", degs}, {"deepest", deepest}});
  }
  pass = pass && inconsistent == 0 && below == 0;
  write_csv(ctx.out_dir / "separation.csv",
            {"trial", "row", "others", "ratio", "lhs", "main_term", "error_budget", "dyadic_budget", "consistent"}, csv);
  PlotSeries s{"min ratio over trials", {}, {}};
  for (std::size_t b = 0; b < rows.size(); ++b) {
    s.x.push_back(rows[b]);
    s.y.push_back(min_ratio[b]);
  }
  write_atomic(ctx.out_dir / "separation.svg",
               svg_plot("separation ratio (" + variant + ")", "block row n", "lhs / |p0(0)|", {s}, std::exp(-0.5)));
  Json mins = Json::array();
  for (double v : min_ratio) mins.push_back(num(v));
  result["min_ratio_per_row"] = mins;
  result["inconsistent"] = inconsistent;
  result["deepest_below_threshold"] = below;
  result["vacuous_trials"] = vacuous;
  result["threshold"] = num(threshold);
  result["trials"] = per_trial;
  return emit(ctx, "separation", inputs, result, pass);
}

// ---------------------------------------------------------------- bootstrap

int bootstrap(const RunContext& ctx) {
  Config cfg(ctx.config, "bootstrap");
  auto bp = prop37_params(cfg);
  const auto i_list = cfg.int_list("i_set", {1, 2}, 1, 8);
  const auto j_cfg = cfg.integer("J", 0, 0, 8);
  const int degree = static_cast<int>(cfg.integer("degree", 4, 0, 64));
  const int trials = static_cast<int>(cfg.integer("trials", 5, 1, 10000));
  const auto n = cfg.u64("samples", 4096, 1);
  const double scale = cfg.real("scale", 0.99, 0.0, 1e6);
  cfg.finish();

  std::vector<int> i_set(i_list.begin(), i_list.end());
  const int jl = j_cfg ? static_cast<int>(j_cfg) : i_set.back() + 1;
  Json inputs = {{"i_set", i_set}, {"J", jl}, {"N", n}, {"seed", bp.opt.seed}, {"profile", profile_name(bp.profile)}};
  const double c = resolve_c_hat(bp, inputs);
  const auto t = prop37_table(ctx, bp, c);
  inputs["table"] = cache_id(t);

  std::mt19937_64 rng(bp.opt.seed);
  Json reps = Json::array();
  bool pass = true;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<DensePolynomial> p;
    for (std::size_t k = 0; k < i_set.size(); ++k) p.push_back(random_polynomial(rng, static_cast<int>(rng() % (degree + 1))));
    const double bound = little_bloch_norm_upper(t, i_set, p);
    for (auto& q : p) q = q.scaled(scale / bound);
    BootstrapReport rep;
    try {
      rep = bootstrap_step_check(t, i_set, p, jl, n, bp.opt.seed + static_cast<std::uint64_t>(trial));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    pass = pass && rep.pass;
    Json polys = Json::array();
    for (const auto& q : p) polys.push_back(to_json(q));
    auto j = to_json(rep);
    j["polynomials"] = polys;
    reps.push_back(j);
  }
  return emit(ctx, "bootstrap", inputs, {{"c_hat", num(c)}, {"trials", reps}}, pass);
}

// ---------------------------------------------------------------- report

int report(const RunContext& ctx) {
  Config cfg(ctx.config, "report");
  cfg.finish();
  if (!fs::is_directory(ctx.out_dir)) throw UsageError("no output directory " + ctx.out_dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(ctx.out_dir))
    if (e.path().extension() == ".json" && e.path().stem() != "report") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw UsageError("no reports in " + ctx.out_dir.string());
  Json runs = Json::object();
  bool pass = true;
  std::string md = "| command | status | inputs |\n|---|---|---|\n";
  for (const auto& f : files) {
    std::ifstream in(f);
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const Json::exception&) {
      continue;
    }
    if (!doc.is_object() || !doc.contains("command")) continue;
    const bool ok = doc.value("pass", false), info = doc.value("informational", false);
    if (!info) pass = pass && ok;
    const std::string status = info ? "informational" : ok ? "pass" : "FAIL";
    runs[doc["command"].get<std::string>()] = {{"status", status}, {"inputs", doc["inputs"]}};
    md += "| " + doc["command"].get<std::string>() + " | " + status + " | `" + doc["inputs"].dump() + "` |\n";
  }
  write_atomic(ctx.out_dir / "report.md", md);
  return emit(ctx, "report", {{"out_dir", ctx.out_dir.filename().string()}}, {{"runs", runs}}, pass);
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"build-seq", "verify-seq", "sz-test",    "makarov-test", "lemma35",
                                              "estimate-c", "separation", "bootstrap", "report"};
  return names;
}

int run_command(const std::string& name, const RunContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  if (name == "build-seq") code = build_seq(ctx);
  else if (name == "verify-seq") code = verify_seq(ctx);
  else if (name == "sz-test") code = sz_test(ctx);
  else if (name == "makarov-test") code = makarov_test(ctx);
  else if (name == "lemma35") code = lemma35(ctx);
  else if (name == "estimate-c") code = estimate_c_cmd(ctx);
  else if (name == "separation") code = separation(ctx);
  else if (name == "bootstrap") code = bootstrap(ctx);
  else if (name == "report") code = report(ctx);
  else throw UsageError("unknown subcommand " + name);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << name << ": " << secs << " s\n";
  return code;
}

}  // namespace lacunary::cli
