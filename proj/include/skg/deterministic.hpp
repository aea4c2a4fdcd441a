#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "skg/erasure.hpp"
#include "skg/matrix.hpp"

namespace skg::det {

/// Nested family F_0..F_s of linear channel maps: kernels strictly shrink,
/// rank(F_i - F_{i-1}) = rank(F_i) - rank(F_{i-1}), and F_s is the identity.
struct DetChannelFamily {
  explicit DetChannelFamily(gf::Field f) : field(f) {}
  gf::Field field;
  std::size_t dim = 0;             // L
  std::vector<std::size_t> ranks;  // r_0 = 0 <= ... <= r_s = L
  std::vector<gf::Matrix> maps;    // F_0..F_s

  std::size_t states() const { return ranks.empty() ? 0 : ranks.size() - 1; }
  /// Checks every structural invariant by exact rank computations; throws on
  /// the first violation.
  void validate() const;
};

/// Coordinate-selection family: F_i keeps the top r_i coordinates.
DetChannelFamily shift_family(std::size_t dim, std::uint32_t q,
                              const std::vector<std::size_t>& ranks);

/// Conjugates a family by a random invertible basis change; preserves every
/// invariant while leaving the coordinate structure behind.
DetChannelFamily conjugated_family(const DetChannelFamily& fam, Rng& rng);

/// Complementary layer subspaces: ker F_{i-1} = Pi_i (+) ker F_i, so the
/// prefix direct sums Pi_i (+) ... (+) Pi_1 (+) ker F_i recover the whole
/// space and dim Pi_i = rank F_i - rank F_{i-1}.
struct LayerDecomposition {
  std::vector<gf::Matrix> layers;  // Pi_1..Pi_s, basis rows
};
LayerDecomposition decompose_layers(const DetChannelFamily& fam);

/// Capacity sum_i [rank F_i - rank F_{i-1}] theta_i (1-theta_i) log2 q.
double det_capacity(const DetChannelFamily& fam, const std::vector<double>& deltas);

/// Same value reached through the converse route: rank(F_i - F_{i-1})
/// weighted by the partial sums of rho_i = delta_i - kappa_i.
double det_upper_bound(const DetChannelFamily& fam, const std::vector<double>& deltas);

struct LayeredOutcome {
  std::vector<erasure::ProtocolOutcome> layers;  // one per nonempty layer
  std::vector<std::size_t> layer_dims;
  double rate_bits_per_use = 0.0;
  bool keys_agree = true;
  std::optional<double> leakage_bits;
};

/// Runs the erasure protocol independently on every layer; layer i of the
/// broadcast at time t reaches receiver r iff its sampled state S_r[t] >= i,
/// all layers driven by the same per-receiver state sequence.
LayeredOutcome run_layered_protocol(const DetChannelFamily& fam,
                                    const std::vector<double>& deltas, std::size_t m,
                                    std::size_t n, std::uint64_t seed,
                                    const erasure::RunOptions& opts = {});

}  // namespace skg::det
