#pragma once

#include "lacunary/index.hpp"
#include "lacunary/series.hpp"

#include <string>
#include <vector>

namespace lacunary {

struct CorpusEntry {
  std::string label;
  SparseSeries f;
  double norm_upper = 0.0;  ///< bloch_norm_upper(f)
};

/// 20 lacunary series with exponents e_{m+1} = ceil(q e_m), e_0 = 1, below 3e7, q in {1.5, 2, 2.5, 3, 4}, and
/// coefficients that are constant, alternating, random on the unit circle or decaying like m^{-1/2}.
/// Every series is scaled to bloch_norm_upper just below 1 and has f(0) = 0.
std::vector<CorpusEntry> makarov_corpus(std::uint64_t seed = 1);

/// 1 - 1/e and 1 - 10^{-k/2} for k = 2..12.
std::vector<RadiusSpec> makarov_radii();

/// Ten plain radii 0.05 .. 0.905, six radii 1 - 10^{-1.5} .. 1 - 10^{-4} and 1 - 3^{-k}, k = 2..49,
/// in increasing order: 64 circles.
std::vector<RadiusSpec> growth_radii();

/// The Makarov corpus, pow3 blocks s = 1..6, the column functions of a depth-24 table
/// (columns 1..4) and eight branch functions of depth 5, each with its certified norm bound.
std::vector<CorpusEntry> generator_corpus(const ExponentTable& depth24, const ExponentTable& single63);

/// x = 0.1, 0.2, ..., 1.2: the grid used to fit the block tail constant.
std::vector<double> default_c_grid();

/// Eight branches with distinct leading three digits: alpha = (k + 1/2) / 8 at the given depth.
std::vector<AlphaBranch> eight_branches(int depth);

}  // namespace lacunary
