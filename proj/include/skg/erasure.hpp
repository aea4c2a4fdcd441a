#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "skg/matrix.hpp"
#include "skg/rng.hpp"
#include "skg/secure_coding.hpp"

namespace skg::erasure {

struct ErasureConfig {
  std::size_t m = 3;           // honest terminals, including the sender
  std::size_t n = 1000;        // broadcast length
  std::size_t packet_len = 16; // field elements per packet (L)
  std::uint32_t q = 65536;
  double delta = 0.5;    // erasure probability to each honest receiver
  double delta_e = 0.5;  // erasure probability to Eve
  std::uint64_t seed = 0;

  void validate() const {
    if (m < 2) throw std::invalid_argument("m must be at least 2");
    if (n < 1 || packet_len < 1) throw std::invalid_argument("n and L must be positive");
    if (delta < 0 || delta > 1 || delta_e < 0 || delta_e > 1)
      throw std::invalid_argument("erasure probabilities must lie in [0, 1]");
    if (m - 1 > 20) throw std::invalid_argument("receiver subsets limited to m <= 21");
  }
};

struct ReceptionTable {
  std::vector<std::vector<std::uint32_t>> honest;  // m-1 sorted index sets
  std::vector<std::uint32_t> eve;
};

struct ProtocolCounts {
  std::size_t n_star = 0, h = 0, l = 0;
  std::vector<std::size_t> h_i;  // per honest receiver
};

/// Everything the eavesdropper ends up with: her own receptions plus the
/// public transcript (all coefficient matrices and the z-packet contents).
struct EveView {
  explicit EveView(gf::Field f)
      : y_map(f, 0, 0), z_coeffs(f, 0, 0), key_coeffs(f, 0, 0), z_packets(f, 0, 0) {}
  std::vector<std::uint32_t> x_indices;
  gf::Matrix y_map;      // h x n, combinations over broadcast index space
  gf::Matrix z_coeffs;   // (h-l) x h, over y index space
  gf::Matrix key_coeffs; // l x h
  gf::Matrix z_packets;  // (h-l) x L, revealed contents
};

struct ProtocolOutcome {
  explicit ProtocolOutcome(gf::Field f) : field(f), eve(f) {}
  gf::Field field;
  std::size_t m = 0, n = 0, packet_len = 0;
  std::uint64_t seed = 0;
  ProtocolCounts counts;
  std::vector<gf::Matrix> keys;  // index 0 = sender, then receivers 1..m-1
  bool keys_agree = false;
  EveView eve;
  double rate_bits_per_use = 0.0;
  std::optional<double> leakage_bits;
  std::size_t mds_subsets = 0, random_subsets = 0;
};

struct RunOptions {
  bool compute_leakage = true;
  std::uint64_t layer = 1;  // stream namespace; the layered protocol sets it
};

struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Stream feeding receiver r's channel randomness (r = 0 is Eve). Shared
/// with the state-dependent layered protocol, which derives all layer
/// erasures from one state draw per receiver per time step.
Rng channel_stream(std::uint64_t seed, std::size_t receiver_id);

/// Bernoulli receptions for every receiver and Eve. Reception streams are
/// keyed per receiver, independent of every other protocol phase.
ReceptionTable simulate_channel(const ErasureConfig& config);

/// Splits [0, n) into the groups of packets received by exactly the same set
/// of honest receivers; keys are bitmasks over receivers 1..m-1 (bit i-1 for
/// receiver i). Packets received by nobody are absent.
std::map<std::uint32_t, std::vector<std::uint32_t>> partition_commonly_received(
    const std::vector<std::vector<std::uint32_t>>& honest_sets, std::size_t n);

/// Full protocol run: private phase, initial public discussion (feedback,
/// secure y-combinations per subset), reconciliation (z-packets), and key
/// extraction. Every honest terminal's key is computed from its own view.
ProtocolOutcome run_protocol(const ErasureConfig& config, const RunOptions& opts = {});

/// Same, with externally supplied receptions (used by the layered protocol).
ProtocolOutcome run_protocol(const ErasureConfig& config, const ReceptionTable& rec,
                             const RunOptions& opts = {});

/// (1 - delta) * delta_E * L * log2(q) bits per channel use.
double erasure_capacity(double delta, double delta_e, std::size_t packet_len,
                        std::uint32_t q);

/// Exact leakage I(K; Eve's view) in bits via the rank identity for linear
/// functions of uniform inputs.
double leakage_bits(const ProtocolOutcome& outcome);

}  // namespace skg::erasure
