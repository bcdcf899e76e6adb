#include "lacunary/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lacunary {

namespace fs = std::filesystem;

Json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double num_from(const Json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  throw std::invalid_argument("not a number: " + s);
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

Json complex_json(Complex c) { return Json::array({num(c.real()), num(c.imag())}); }
Complex complex_from(const Json& j) { return {num_from(j.at(0)), num_from(j.at(1))}; }

}  // namespace

Json to_json(const BigExponent& e) {
  if (auto m = e.pow3_index()) return Json{{"pow3", *m}};
  return to_decimal(e.value());
}

BigExponent exponent_from_json(const Json& j) {
  if (j.is_object()) return BigExponent::pow3(j.at("pow3").get<std::int64_t>());
  return BigExponent(parse_decimal(j.get<std::string>()));
}

Json to_json(const RadiusSpec& r) {
  switch (r.kind()) {
    case RadiusSpec::Kind::SqrtComplement:
      return {{"kind", "sqrt_complement"}, {"n", to_decimal(r.parameter())}};
    case RadiusSpec::Kind::OneMinusPow3:
      return {{"kind", "one_minus_pow3"}, {"k", to_decimal(r.parameter())}};
    case RadiusSpec::Kind::Plain:
      break;
  }
  return {{"kind", "plain"}, {"r", num(r.plain_value())}};
}

RadiusSpec radius_from_json(const Json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "sqrt_complement") return RadiusSpec::sqrt_complement(parse_decimal(j.at("n").get<std::string>()));
  if (kind == "one_minus_pow3") return RadiusSpec::one_minus_pow3(parse_decimal(j.at("k").get<std::string>()));
  if (kind == "plain") return RadiusSpec::plain(num_from(j.at("r")));
  throw std::invalid_argument("unknown radius kind " + kind);
}

Json to_json(const SparseSeries& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms()) terms.push_back({{"c", complex_json(t.coeff)}, {"e", to_json(t.exponent)}});
  return {{"constant", complex_json(f.constant())}, {"terms", terms}};
}

SparseSeries series_from_json(const Json& j) {
  std::vector<SeriesTerm> terms;
  for (const auto& t : j.at("terms")) terms.push_back({complex_from(t.at("c")), exponent_from_json(t.at("e"))});
  return SparseSeries(complex_from(j.at("constant")), std::move(terms));
}

Json to_json(const DensePolynomial& p) {
  Json c = Json::array();
  for (const auto& x : p.coeffs()) c.push_back(complex_json(x));
  return c;
}

DensePolynomial polynomial_from_json(const Json& j) {
  std::vector<Complex> c;
  for (const auto& x : j) {
    if (x.is_array()) c.push_back(complex_from(x));
    else c.emplace_back(num_from(x), 0.0);
  }
  return DensePolynomial(std::move(c));
}

Json to_json(const ExponentTable& t) {
  Json entries = Json::array();
  for (const auto& e : t.entries)
    entries.push_back({{"n", e.n}, {"i", e.i}, {"s", to_decimal(e.s)},
                       {"first_candidate", to_decimal(e.first_candidate)}, {"retries", e.retries}});
  return {{"type", "lemma21"}, {"n_max", t.n_max}, {"columns", t.columns},
          {"seed_start", to_decimal(t.seed_start)}, {"entries", entries}};
}

ExponentTable exponent_table_from_json(const Json& j) {
  if (j.at("type") != "lemma21") throw std::invalid_argument("not an exponent table");
  ExponentTable t;
  t.n_max = j.at("n_max").get<int>();
  t.columns = j.at("columns").get<int>();
  t.seed_start = parse_decimal(j.at("seed_start").get<std::string>());
  for (const auto& e : j.at("entries"))
    t.entries.push_back({e.at("n").get<int>(), e.at("i").get<int>(), parse_decimal(e.at("s").get<std::string>()),
                         parse_decimal(e.at("first_candidate").get<std::string>()), e.at("retries").get<int>()});
  std::size_t expect = 0;
  for (int n = 1; n <= t.n_max; ++n) expect += static_cast<std::size_t>(t.width(n));
  if (t.entries.size() != expect) throw std::invalid_argument("exponent table has the wrong number of entries");
  return t;
}

Json to_json(const BlockTable& t) {
  Json entries = Json::array();
  for (const auto& e : t.entries) {
    const auto& m = e.measure;
    entries.push_back({{"i", e.i}, {"j", e.j}, {"s", to_decimal(e.s)},
                       {"first_candidate", to_decimal(e.first_candidate)}, {"retries", e.retries},
                       {"limit_measure", num(e.limit_measure)},
                       {"measure", {{"samples", m.samples}, {"hits", m.hits}, {"measure", num(m.measure)},
                                    {"lower", num(m.lower)}, {"target", num(m.target)},
                                    {"evaluated", m.evaluated}, {"pass", m.pass}}}});
  }
  return {{"type", "prop37"}, {"j_max", t.j_max}, {"profile", profile_name(t.profile)}, {"c_hat", num(t.c_hat)},
          {"seed", t.seed}, {"mc_samples", t.mc_samples}, {"mc_work_budget", t.mc_work_budget},
          {"entries", entries}};
}

BlockTable block_table_from_json(const Json& j) {
  if (j.at("type") != "prop37") throw std::invalid_argument("not a block table");
  BlockTable t;
  t.j_max = j.at("j_max").get<int>();
  t.profile = parse_profile(j.at("profile").get<std::string>());
  t.c_hat = num_from(j.at("c_hat"));
  t.seed = j.at("seed").get<std::uint64_t>();
  t.mc_samples = j.at("mc_samples").get<std::uint64_t>();
  t.mc_work_budget = j.at("mc_work_budget").get<std::uint64_t>();
  for (const auto& e : j.at("entries")) {
    BlockEntry b;
    b.i = e.at("i").get<int>();
    b.j = e.at("j").get<int>();
    b.s = parse_decimal(e.at("s").get<std::string>());
    b.first_candidate = parse_decimal(e.at("first_candidate").get<std::string>());
    b.retries = e.at("retries").get<int>();
    b.limit_measure = num_from(e.at("limit_measure"));
    const auto& m = e.at("measure");
    b.measure = {m.at("samples").get<std::uint64_t>(), m.at("hits").get<std::uint64_t>(), num_from(m.at("measure")),
                 num_from(m.at("lower")), num_from(m.at("target")), m.at("evaluated").get<bool>(),
                 m.at("pass").get<bool>()};
    t.entries.push_back(std::move(b));
  }
  if (t.entries.size() != static_cast<std::size_t>(t.j_max * (t.j_max + 1) / 2))
    throw std::invalid_argument("block table has the wrong number of entries");
  return t;
}

// ---------------------------------------------------------------- reports

Json to_json(const Lemma21Report& r) {
  Json v = Json::array();
  for (const auto& x : r.violations)
    v.push_back({{"condition", std::string(1, x.condition)}, {"n", x.n}, {"i", x.i}, {"n2", x.n2}, {"i2", x.i2},
                 {"value", num(x.value)}});
  return {{"pass", r.pass}, {"checks_i", r.checks_i}, {"checks_ii", r.checks_ii}, {"checks_iii", r.checks_iii},
          {"worst_iii_log_margin", num(r.worst_iii_log_margin)}, {"violations", v}};
}

Json to_json(const Prop37Report& r) {
  Json v = Json::array();
  for (const auto& x : r.violations)
    v.push_back({{"condition", x.condition}, {"i", x.i}, {"j", x.j}, {"i2", x.i2}, {"j2", x.j2}, {"value", num(x.value)}});
  return {{"pass", r.pass}, {"deterministic_pass", r.deterministic_pass}, {"measure_certified", r.measure_certified},
          {"measure_uncertified", r.measure_uncertified}, {"measure_failed", r.measure_failed},
          {"radii_increasing", r.radii_increasing}, {"violations", v}};
}

Json to_json(const InequalityReport& r) {
  return {{"name", r.name}, {"lhs", num(r.lhs)}, {"rhs", num(r.rhs)}, {"margin", num(r.margin)},
          {"pass", r.pass}, {"grid", r.grid}};
}

Json to_json(const GrowthReport& r) {
  Json v = Json::array();
  for (const auto& w : r.violations)
    v.push_back({{"radius", to_json(w.radius)}, {"sample", w.sample_index}, {"lhs", num(w.lhs)}, {"rhs", num(w.rhs)}});
  return {{"pass", r.pass}, {"points", r.points}, {"max_ratio", num(r.max_ratio)}, {"violations", v}};
}

Json to_json(const SeparationReport& r) {
  return {{"block", to_json(r.block)}, {"block_row", r.block_row}, {"n_samples", r.n_samples},
          {"lhs", num(r.lhs)}, {"main_term", num(r.main_term)},
          {"terms", {{"cross_own", num(r.cross_own)}, {"poly_own", num(r.poly_own)},
                     {"cross_other", num(r.cross_other)}, {"poly_other", num(r.poly_other)},
                     {"rounding", num(r.rounding)}}},
          {"error_budget", num(r.error_budget)}, {"dyadic_budget", num(r.dyadic_budget)},
          {"tail_budget", num(r.tail_budget)}, {"p0_at_zero", num(r.p0_at_zero)}, {"ratio", num(r.ratio)},
          {"vacuous", r.vacuous}, {"consistent", r.consistent}};
}

Json to_json(const BootstrapReport& r) {
  Json members = Json::array();
  for (const auto& m : r.members) {
    Json links = Json::array();
    for (const auto& l : m.links)
      links.push_back({{"name", l.name}, {"value", num(l.value)}, {"bound", num(l.bound)}, {"pass", l.pass},
                       {"evaluated", l.evaluated}});
    members.push_back({{"i", m.i}, {"u_at_j", num(m.u_at_j)}, {"lp_next", num(m.lp_next)},
                       {"measure_a", num(m.measure_a)}, {"lp_j", num(m.lp_j)}, {"split_rhs", num(m.split_rhs)},
                       {"x", num(m.x_value)}, {"x_squared", num(m.x_squared)}, {"exp_mean", num(m.exp_mean)},
                       {"u_at_j_minus", num(m.u_at_j_minus)}, {"links", links}});
  }
  return {{"J", r.j_level}, {"profile", r.profile}, {"c_hat", num(r.c_hat)}, {"norm_upper", num(r.norm_upper)},
          {"chain_measure_bound", num(r.chain_measure_bound)}, {"hypotheses_hold", r.hypotheses_hold},
          {"pass", r.pass}, {"failed_link", r.failed_link}, {"members", members}};
}

Json to_json(const CHat& c) {
  Json pts = Json::array();
  for (const auto& p : c.points)
    pts.push_back({{"s", p.s}, {"x", num(p.x)}, {"tail", num(p.tail)}, {"c_point", num(p.c_point)}, {"used", p.used}});
  Json per = Json::array();
  for (double v : c.per_s) per.push_back(num(v));
  return {{"c_hat", num(c.value)}, {"s_list", c.s_list}, {"per_s", per}, {"spread", num(c.spread)},
          {"in_window", c.in_window}, {"stable", c.stable}, {"points", pts}};
}

Json to_json(const Lemma35Report& r) {
  return {{"s", r.s}, {"parseval", num(r.parseval)}, {"ratio", num(r.ratio)}, {"lower", num(r.lower)},
          {"upper", num(r.upper)}, {"min_term", num(r.min_term)}, {"pass", r.pass}};
}

Json to_json(const Lemma36Report& r) {
  Json pts = Json::array();
  for (const auto& p : r.points)
    pts.push_back({{"x", num(p.x)}, {"tail", num(p.tail)}, {"bound", num(p.bound)}, {"pass", p.pass}});
  return {{"s", r.s}, {"c_hat", num(r.c_hat)}, {"eps", num(r.eps)}, {"pass", r.pass}, {"points", pts}};
}

// ---------------------------------------------------------------- cache

std::string lemma21_cache_id(int n_max, int columns, const BigInt& seed_start) {
  return "lemma21_n" + std::to_string(n_max) + "_c" + std::to_string(columns) + "_s" + to_decimal(seed_start);
}

std::string prop37_cache_id(int j_max, ConstantProfile profile, double c_hat, std::uint64_t seed,
                            std::uint64_t mc_samples) {
  return "prop37_j" + std::to_string(j_max) + "_" + profile_name(profile) + "_c" + fmt17(c_hat) + "_seed" +
         std::to_string(seed) + "_mc" + std::to_string(mc_samples);
}

std::string cache_id(const ExponentTable& t) { return lemma21_cache_id(t.n_max, t.columns, t.seed_start); }
std::string cache_id(const BlockTable& t) {
  return prop37_cache_id(t.j_max, t.profile, t.c_hat, t.seed, t.mc_samples);
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream out;
  for (unsigned int k = 0; k < len; ++k) out << std::hex << std::setw(2) << std::setfill('0') << int(md[k]);
  return out.str();
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

namespace {

fs::path store(const fs::path& dir, const std::string& kind, const std::string& id, const Json& payload) {
  const Json env = {{"schema", kCacheSchema}, {"kind", kind}, {"id", id},
                    {"sha256", sha256_hex(payload.dump())}, {"payload", payload}};
  const fs::path path = dir / (id + ".json");
  write_atomic(path, env.dump(1) + "\n");
  return path;
}

Json fetch(const fs::path& dir, const std::string& kind, const std::string& id) {
  const fs::path path = dir / (id + ".json");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError(CacheError::Reason::Missing, "no cached table " + path.string());
  Json env;
  try {
    env = Json::parse(in);
  } catch (const Json::exception& e) {
    throw CacheError(CacheError::Reason::Corrupt, path.string() + ": " + e.what());
  }
  if (!env.is_object() || !env.contains("schema") || env["schema"] != kCacheSchema)
    throw CacheError(CacheError::Reason::Schema, path.string() + ": unsupported schema version");
  if (env.value("kind", "") != kind || env.value("id", "") != id)
    throw CacheError(CacheError::Reason::Corrupt, path.string() + ": kind or id mismatch");
  if (!env.contains("payload") || sha256_hex(env["payload"].dump()) != env.value("sha256", ""))
    throw CacheError(CacheError::Reason::Checksum, path.string() + ": checksum mismatch");
  return env["payload"];
}

template <class F>
auto decode(const std::string& id, F&& f) {
  try {
    return f();
  } catch (const CacheError&) {
    throw;
  } catch (const std::exception& e) {
    throw CacheError(CacheError::Reason::Corrupt, id + ": " + e.what());
  }
}

}  // namespace

fs::path cache_table(const fs::path& dir, const ExponentTable& t) { return store(dir, "lemma21", cache_id(t), to_json(t)); }
fs::path cache_table(const fs::path& dir, const BlockTable& t) { return store(dir, "prop37", cache_id(t), to_json(t)); }

ExponentTable load_exponent_table(const fs::path& dir, const std::string& id) {
  const auto payload = fetch(dir, "lemma21", id);
  return decode(id, [&] { return exponent_table_from_json(payload); });
}

BlockTable load_block_table(const fs::path& dir, const std::string& id) {
  const auto payload = fetch(dir, "prop37", id);
  return decode(id, [&] { return block_table_from_json(payload); });
}

// ---------------------------------------------------------------- CSV, SVG

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << csv_field(r[k]);
    out << "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  write_atomic(path, out.str());
}

std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<PlotSeries>& series, double ref) {
  constexpr double kW = 640, kH = 400, kL = 70, kR = 20, kT = 40, kB = 50;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      x0 = std::min(x0, s.x[k]);
      x1 = std::max(x1, s.x[k]);
      y0 = std::min(y0, s.y[k]);
      y1 = std::max(y1, s.y[k]);
    }
  if (std::isfinite(ref)) {
    y0 = std::min(y0, ref);
    y1 = std::max(y1, ref);
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); };
  auto py = [&](double y) { return kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
  o << "<line x1=\"" << kL << "\" y1=\"" << kH - kB << "\" x2=\"" << kW - kR << "\" y2=\"" << kH - kB << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << kL << "\" y1=\"" << kT << "\" x2=\"" << kL << "\" y2=\"" << kH - kB << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
    o << "<text x=\"" << px(xv) << "\" y=\"" << kH - kB + 16 << "\" text-anchor=\"middle\">" << fmt17(xv).substr(0, 8) << "</text>\n";
    o << "<text x=\"" << kL - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << fmt17(yv).substr(0, 8) << "</text>\n";
  }
  o << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 10 << "\" text-anchor=\"middle\">" << xml_escape(xlabel) << "</text>\n";
  o << "<text x=\"16\" y=\"" << kH / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << kH / 2 << ")\">" << xml_escape(ylabel) << "</text>\n";
  if (std::isfinite(ref))
    o << "<line x1=\"" << kL << "\" y1=\"" << py(ref) << "\" x2=\"" << kW - kR << "\" y2=\"" << py(ref)
      << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* c = colors[s % 6];
    o << "<polyline fill=\"none\" stroke=\"" << c << "\" points=\"";
    for (std::size_t k = 0; k < series[s].x.size() && k < series[s].y.size(); ++k)
      if (std::isfinite(series[s].x[k]) && std::isfinite(series[s].y[k]))
        o << px(series[s].x[k]) << "," << py(series[s].y[k]) << " ";
    o << "\"/>\n";
    o << "<text x=\"" << kW - kR - 4 << "\" y=\"" << kT + 14 * (s + 1) << "\" text-anchor=\"end\" fill=\"" << c << "\">"
      << xml_escape(series[s].name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace lacunary
