#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "skg/matrix.hpp"
#include "skg/rng.hpp"

namespace skg::coding {

/// Parameters for building combinations of n packets that stay independent
/// of an eavesdropper who holds n_e of them.
struct SecureCombinationSpec {
  std::size_t n = 0;    // packet count
  std::size_t n_e = 0;  // eavesdropper reception count
  gf::Field field;

  void validate_mds() const {
    if (n_e > n) throw std::invalid_argument("n_e must not exceed n");
    if (field.order() < n + 1)
      throw std::invalid_argument("MDS construction needs q >= n + 1");
  }
};

/// Generator of an [n, n - n_e, n_e + 1] Reed-Solomon code (Vandermonde on
/// the evaluation points 1..n). Stacking it on any selection matrix with n_e
/// one-hot rows yields full rank n, which is the exact zero-leakage
/// certificate for the combinations.
gf::Matrix mds_secure_generator(const SecureCombinationSpec& spec);

/// Uniformly random (n - n_e) x n matrix. Succeeds in the same role with
/// probability 1 - O(1/q); the caller verifies the realized selection via
/// stack_rank and retries on failure.
gf::Matrix random_secure_generator(const SecureCombinationSpec& spec, Rng& rng);

struct ReconciliationPlan {
  std::size_t total = 0;                                // h
  std::vector<std::vector<std::uint32_t>> received_sets;  // per terminal
  gf::Matrix combinations;                              // (h - l) x h
};

struct ReconciliationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Draws h - l random combination rows (l = min_i |received_i|) and verifies
/// that every terminal's unit rows stacked with them span all h coordinates;
/// retries up to max_retries before giving up.
ReconciliationPlan design_reconciliation(
    const std::vector<std::vector<std::uint32_t>>& received_sets, std::size_t h,
    gf::Field field, Rng& rng, int max_retries = 16);

/// Key extraction: completes a_z to a basis and applies the new rows to the
/// packets. Returns (key_coeffs, key_packets).
std::pair<gf::Matrix, gf::Matrix> extract_key(const gf::Matrix& a_z,
                                              const gf::Matrix& y_packets);

}  // namespace skg::coding
