#pragma once

#include "lacunary/bloch.hpp"
#include "lacunary/index.hpp"
#include "lacunary/seq.hpp"
#include "lacunary/series.hpp"
#include "lacunary/stochastic.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace lacunary {

using Json = nlohmann::ordered_json;

inline constexpr int kCacheSchema = 1;

/// Finite doubles as numbers; infinities and NaN as the strings "inf", "-inf", "nan".
Json num(double x);
double num_from(const Json& j);
/// %.17g
std::string fmt17(double x);

Json to_json(const BigExponent& e);   ///< decimal string or {"pow3": m}
BigExponent exponent_from_json(const Json& j);
Json to_json(const RadiusSpec& r);    ///< {"kind": ..., parameter}
RadiusSpec radius_from_json(const Json& j);
Json to_json(const SparseSeries& f);
SparseSeries series_from_json(const Json& j);
Json to_json(const DensePolynomial& p);
DensePolynomial polynomial_from_json(const Json& j);

Json to_json(const ExponentTable& t);
ExponentTable exponent_table_from_json(const Json& j);
Json to_json(const BlockTable& t);
BlockTable block_table_from_json(const Json& j);

Json to_json(const Lemma21Report& r);
Json to_json(const Prop37Report& r);
Json to_json(const InequalityReport& r);
Json to_json(const GrowthReport& r);
Json to_json(const SeparationReport& r);
Json to_json(const BootstrapReport& r);
Json to_json(const CHat& c);
Json to_json(const Lemma35Report& r);
Json to_json(const Lemma36Report& r);

/// Cache ids include every construction parameter, so distinct profiles or seeds never collide.
std::string cache_id(const ExponentTable& t);
std::string cache_id(const BlockTable& t);
std::string lemma21_cache_id(int n_max, int columns, const BigInt& seed_start);
std::string prop37_cache_id(int j_max, ConstantProfile profile, double c_hat, std::uint64_t seed,
                            std::uint64_t mc_samples);

class CacheError : public std::runtime_error {
 public:
  enum class Reason { Missing, Schema, Checksum, Corrupt };
  CacheError(Reason reason, const std::string& what) : std::runtime_error(what), reason_(reason) {}
  Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

std::string sha256_hex(const std::string& data);

/// Writes {schema, kind, id, sha256, payload} atomically to dir/id.json and returns the path.
std::filesystem::path cache_table(const std::filesystem::path& dir, const ExponentTable& t);
std::filesystem::path cache_table(const std::filesystem::path& dir, const BlockTable& t);
ExponentTable load_exponent_table(const std::filesystem::path& dir, const std::string& id);
BlockTable load_block_table(const std::filesystem::path& dir, const std::string& id);

/// Write through a temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal line plot; an optional horizontal reference line at ref (NaN for none).
std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<PlotSeries>& series, double ref = std::numeric_limits<double>::quiet_NaN());

}  // namespace lacunary
