#include "skg/sweeps.hpp"

#include <algorithm>
#include <cmath>

namespace skg::sweeps {
namespace {

double rate_scale(gauss::RateConvention conv, std::size_t block_len) {
  // Solver rates are per unit block length in the real convention.
  return double(block_len) * (conv == gauss::RateConvention::kComplex ? 2.0 : 1.0);
}

}  // namespace

BoundsRow bounds_for(const gauss::GainProfile& gains, const gauss::StateProfile& profile,
                     gauss::RateConvention conv) {
  BoundsRow row;
  row.best = kkt::optimize(gains, profile);
  row.achievable = row.best.rate * rate_scale(conv, gains.block_len);
  row.upper_bound = gauss::gauss_upper_bound(gains, profile, conv);
  return row;
}

std::vector<Example1Row> example1(double p_max, std::size_t points,
                                  gauss::RateConvention conv, std::size_t block_len) {
  std::vector<Example1Row> rows;
  rows.reserve(points);
  for (std::size_t i = 1; i <= points; ++i) {
    const double h1_db = -5.0 + 35.0 * double(i) / double(points + 1);
    gauss::GainProfile gains;
    gains.gains = {gauss::db_to_linear(-5.0), gauss::db_to_linear(h1_db),
                   gauss::db_to_linear(30.0)};
    gains.p_max = p_max;
    gains.block_len = block_len;
    gauss::StateProfile profile;
    profile.deltas = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    const BoundsRow b = bounds_for(gains, profile, conv);
    rows.push_back(Example1Row{h1_db, b.achievable, b.upper_bound});
  }
  return rows;
}

std::vector<Example2Row> example2(double p_max, std::size_t grid,
                                  gauss::RateConvention conv, std::size_t block_len) {
  std::vector<Example2Row> rows;
  rows.reserve(grid * grid);
  auto grid_db = [&](std::size_t i) {
    return -5.0 + 35.0 * double(i + 1) / double(grid + 1);
  };
  for (std::size_t i = 0; i < grid; ++i) {
    for (std::size_t j = 0; j < grid; ++j) {
      const double g1 = grid_db(i), g2 = grid_db(j);
      std::vector<double> gains_linear = {
          gauss::db_to_linear(-5.0), gauss::db_to_linear(std::min(g1, g2)),
          gauss::db_to_linear(std::max(g1, g2)), gauss::db_to_linear(30.0)};
      std::vector<double> deltas = {0.25, 0.25, 0.25, 0.25};
      // equal middle gains collapse to one state of double weight
      gauss::merge_equal_states(gains_linear, deltas, 1e-12);
      gauss::GainProfile gains;
      gains.gains = std::move(gains_linear);
      gains.p_max = p_max;
      gains.block_len = block_len;
      gauss::StateProfile profile;
      profile.deltas = std::move(deltas);
      const BoundsRow b = bounds_for(gains, profile, conv);
      rows.push_back(Example2Row{g1, g2, b.achievable, b.upper_bound});
    }
  }
  return rows;
}

Example3Result example3(double p_max, gauss::RateConvention conv,
                        std::size_t block_len) {
  gauss::GainProfile gains;
  for (int i = 0; i <= 35; ++i) gains.gains.push_back(gauss::db_to_linear(-5.0 + i));
  gains.p_max = p_max;
  gains.block_len = block_len;
  gauss::StateProfile profile;
  profile.deltas.assign(36, 1.0 / 36.0);

  const kkt::KktCandidate best = kkt::optimize(gains, profile);
  Example3Result res;
  res.p_max = p_max;
  res.rate = best.rate * rate_scale(conv, block_len);
  res.fractions.reserve(best.powers.size());
  for (double p : best.powers) res.fractions.push_back(p / p_max);
  return res;
}

}  // namespace skg::sweeps
