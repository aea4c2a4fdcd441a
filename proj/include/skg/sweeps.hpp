#pragma once

#include <cstddef>
#include <vector>

#include "skg/gauss.hpp"
#include "skg/kkt.hpp"

namespace skg::sweeps {

/// Three states, h0 = -5 dB, h2 = 30 dB, h1 swept strictly between them,
/// uniform state distribution. One row per sweep point.
struct Example1Row {
  double h1_db = 0, achievable = 0, upper_bound = 0;
};
std::vector<Example1Row> example1(double p_max, std::size_t points,
                                  gauss::RateConvention conv,
                                  std::size_t block_len = 1);

/// Four equiprobable states, h0 = -5 dB, h3 = 30 dB, h1 = min(g1, g2),
/// h2 = max(g1, g2), both swept over an interior grid. Long-format rows.
/// Coinciding gains merge exactly into a smaller state set, so the diagonal
/// is included.
struct Example2Row {
  double g1_db = 0, g2_db = 0, achievable = 0, upper_bound = 0;
};
std::vector<Example2Row> example2(double p_max, std::size_t grid,
                                  gauss::RateConvention conv,
                                  std::size_t block_len = 1);

/// Thirty-six equiprobable states at -5, -4, ..., 30 dB: the optimal power
/// split across the 35 wiretap layers.
struct Example3Result {
  double p_max = 0;
  double rate = 0;
  std::vector<double> fractions;  // P_i / p_max, i = 1..35
};
Example3Result example3(double p_max, gauss::RateConvention conv,
                        std::size_t block_len = 1);

/// Achievable rate (optimal allocation) and the public-discussion upper
/// bound for one configuration.
struct BoundsRow {
  double achievable = 0, upper_bound = 0;
  kkt::KktCandidate best;
};
BoundsRow bounds_for(const gauss::GainProfile& gains, const gauss::StateProfile& profile,
                     gauss::RateConvention conv);

}  // namespace skg::sweeps
