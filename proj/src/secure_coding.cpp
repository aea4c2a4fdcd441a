#include "skg/secure_coding.hpp"

#include <algorithm>

namespace skg::coding {

gf::Matrix mds_secure_generator(const SecureCombinationSpec& spec) {
  spec.validate_mds();
  const gf::Field& f = spec.field;
  const std::size_t k = spec.n - spec.n_e;
  gf::Matrix a(f, k, spec.n);
  for (std::size_t j = 0; j < spec.n; ++j) {
    const std::uint32_t x = std::uint32_t(j + 1);  // evaluation points 1..n
    std::uint32_t v = 1;
    for (std::size_t i = 0; i < k; ++i) {
      a.at(i, j) = std::uint16_t(v);
      v = f.mul(v, x);
    }
  }
  return a;
}

gf::Matrix random_secure_generator(const SecureCombinationSpec& spec, Rng& rng) {
  if (spec.n_e > spec.n) throw std::invalid_argument("n_e must not exceed n");
  const std::size_t k = spec.n - spec.n_e;
  gf::Matrix a(spec.field, k, spec.n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < spec.n; ++j)
      a.at(i, j) = std::uint16_t(rng.below(spec.field.order()));
  return a;
}

namespace {

// rank([E_i; C]) == h  <=>  rank of C restricted to the missing columns is
// h - h_i (eliminate the unit rows first; they pin the received columns).
bool covers_terminal(const gf::Matrix& c,
                     const std::vector<std::uint32_t>& received, std::size_t h) {
  std::vector<bool> got(h, false);
  for (std::uint32_t j : received) got[j] = true;
  std::vector<std::uint32_t> missing;
  for (std::uint32_t j = 0; j < h; ++j)
    if (!got[j]) missing.push_back(j);
  if (missing.empty()) return true;
  if (missing.size() > c.rows()) return false;
  return rank(c.select_columns(missing)) == missing.size();
}

}  // namespace

ReconciliationPlan design_reconciliation(
    const std::vector<std::vector<std::uint32_t>>& received_sets, std::size_t h,
    gf::Field field, Rng& rng, int max_retries) {
  if (received_sets.empty())
    throw std::invalid_argument("design_reconciliation needs at least one terminal");
  std::size_t l = h;
  for (const auto& s : received_sets) l = std::min(l, s.size());
  const std::size_t rows = h - l;

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    gf::Matrix c(field, rows, h);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < h; ++j)
        c.at(i, j) = std::uint16_t(rng.below(field.order()));
    bool ok = rank(c) == rows;
    for (std::size_t i = 0; ok && i < received_sets.size(); ++i)
      ok = covers_terminal(c, received_sets[i], h);
    if (ok) return ReconciliationPlan{h, received_sets, std::move(c)};
  }
  throw ReconciliationError(
      "reconciliation design failed after retry budget (field too small for "
      "the requested pattern)");
}

std::pair<gf::Matrix, gf::Matrix> extract_key(const gf::Matrix& a_z,
                                              const gf::Matrix& y_packets) {
  if (a_z.cols() != y_packets.rows())
    throw std::invalid_argument("extract_key dimension mismatch");
  gf::Matrix key_coeffs = gf::complete_basis(a_z);
  gf::Matrix key_packets = key_coeffs * y_packets;
  return {std::move(key_coeffs), std::move(key_packets)};
}

}  // namespace skg::coding
