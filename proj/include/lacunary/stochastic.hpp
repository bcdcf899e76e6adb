#pragma once

#include "lacunary/series.hpp"

#include <vector>

namespace lacunary {

/// 1 - exp(-x^2 / 2)
double rayleigh_cdf(double x);

class EmpiricalCDF {
 public:
  EmpiricalCDF() = default;
  explicit EmpiricalCDF(std::vector<double> values);

  /// fraction of samples <= x
  double operator()(double x) const;
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  /// sup_x |F(x) - G(x)| for a continuous G, evaluated on both sides of every jump.
  template <class G>
  double kolmogorov(G&& g) const {
    double d = 0.0;
    const double n = static_cast<double>(values_.size());
    for (std::size_t k = 0; k < values_.size(); ++k) {
      const double gx = g(values_[k]);
      d = std::max(d, std::max(std::abs(gx - k / n), std::abs((k + 1) / n - gx)));
    }
    return d;
  }

 private:
  std::vector<double> values_;
};

/// Samples of the block f_s on its radius r_s = 1 - 3^{-2s} at stratified random points
/// (see eval_circle_random; an equispaced N-grid aliases the higher moments once 3^{2s} >> N).
CircleSamples block_samples(std::int64_t s, std::uint64_t n, std::uint64_t seed = 1);

struct SzSample {
  std::int64_t s = 0;
  std::uint64_t n = 0;
  double c = 0.0;  ///< exact Parseval normalization (sum r^{2 3^m} / 2)^{1/2}
  EmpiricalCDF cdf;
};

/// |f_s(r_s zeta_j)| / C over N sample points.
SzSample sz_empirical_cdf(std::int64_t s, std::uint64_t n, std::uint64_t seed = 1);
/// Kolmogorov distance between the normalized block law and the Rayleigh law.
double sz_distance(std::int64_t s, std::uint64_t n, std::uint64_t seed = 1);

struct CFitPoint {
  std::int64_t s = 0;
  double x = 0.0;
  double tail = 0.0;    ///< m(|f_s| > x sqrt(log 1/(1-r_s)))
  double c_point = 0.0; ///< -log(tail) / x^2
  bool used = false;    ///< enough tail samples to enter the fit
};

struct CHat {
  double value = 0.0;
  std::vector<std::int64_t> s_list;
  std::vector<double> per_s;    ///< largest pointwise exponent for each s
  std::vector<CFitPoint> points;
  double spread = 0.0;          ///< max per_s / min per_s - 1
  bool in_window = false;       ///< value inside [2 log 3, 2 e^2 log 3] up to the 1.05 safety factor
  bool stable = false;          ///< spread <= 0.2
};

/// Smallest c with tail >= exp(-c x^2) over the grid, taken per s; the estimate is the
/// largest per-s value times a 1.05 safety factor. Throws if it falls outside the window.
CHat estimate_c(const std::vector<std::int64_t>& s_list, const std::vector<double>& x_grid, std::uint64_t n,
                std::uint64_t seed = 1, double safety = 1.05);

struct Lemma35Report {
  std::int64_t s = 0;
  double parseval = 0.0;  ///< sum_{m=s}^{2s} r_s^{2 3^m}
  double ratio = 0.0;     ///< parseval / s
  double lower = 0.0;     ///< e^{-2} (1 - 0.05)
  double upper = 0.0;     ///< (s + 1) / s
  double min_term = 0.0;  ///< r_s^{2 3^{2s}}, tends to e^{-2}
  bool pass = false;
};
Lemma35Report lemma35_check(std::int64_t s);

struct Lemma36Point {
  double x = 0.0;
  double tail = 0.0;
  double bound = 0.0;  ///< exp(-c x^2) - eps
  bool pass = false;
};
struct Lemma36Report {
  std::int64_t s = 0;
  double c_hat = 0.0;
  double eps = 0.0;
  std::vector<Lemma36Point> points;
  bool pass = true;
};
Lemma36Report lemma36_check(std::int64_t s, const std::vector<double>& x_grid, double eps, double c_hat,
                            std::uint64_t n, std::uint64_t seed = 1);

}  // namespace lacunary
