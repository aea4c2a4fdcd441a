#include "skg/erasure.hpp"

#include <algorithm>
#include <cmath>

namespace skg::erasure {
namespace {

// Stream tags. The channel stream is shared with the deterministic layered
// protocol (one state draw per receiver per time step), so it is keyed by
// receiver only; the remaining phases are namespaced by layer.
enum StreamTag : std::uint64_t { kChannel = 1, kSource = 2, kYGen = 3, kZGen = 4 };

gf::Matrix uniform_matrix(gf::Field f, std::size_t rows, std::size_t cols, Rng& rng) {
  gf::Matrix m(f, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m.at(i, j) = std::uint16_t(rng.below(f.order()));
  return m;
}

}  // namespace

Rng channel_stream(std::uint64_t seed, std::size_t receiver_id) {
  return Rng::stream(seed, {kChannel, receiver_id});
}

ReceptionTable simulate_channel(const ErasureConfig& config) {
  config.validate();
  ReceptionTable rec;
  rec.honest.resize(config.m - 1);
  for (std::size_t r = 1; r < config.m; ++r) {
    Rng rng = channel_stream(config.seed, r);
    for (std::uint32_t t = 0; t < config.n; ++t)
      if (rng.next_double() >= config.delta) rec.honest[r - 1].push_back(t);
  }
  Rng rng = channel_stream(config.seed, 0);  // receiver id 0 = Eve
  for (std::uint32_t t = 0; t < config.n; ++t)
    if (rng.next_double() >= config.delta_e) rec.eve.push_back(t);
  return rec;
}

std::map<std::uint32_t, std::vector<std::uint32_t>> partition_commonly_received(
    const std::vector<std::vector<std::uint32_t>>& honest_sets, std::size_t n) {
  std::vector<std::uint32_t> mask(n, 0);
  for (std::size_t i = 0; i < honest_sets.size(); ++i)
    for (std::uint32_t t : honest_sets[i]) mask.at(t) |= (1u << i);
  std::map<std::uint32_t, std::vector<std::uint32_t>> groups;
  for (std::uint32_t t = 0; t < n; ++t)
    if (mask[t]) groups[mask[t]].push_back(t);
  return groups;
}

ProtocolOutcome run_protocol(const ErasureConfig& config, const RunOptions& opts) {
  return run_protocol(config, simulate_channel(config), opts);
}

ProtocolOutcome run_protocol(const ErasureConfig& config, const ReceptionTable& rec,
                             const RunOptions& opts) {
  config.validate();
  const gf::Field field = gf::Field::of_order(config.q);
  const std::size_t L = config.packet_len;
  const std::size_t receivers = config.m - 1;

  ProtocolOutcome out(field);
  out.m = config.m;
  out.n = config.n;
  out.packet_len = L;
  out.seed = config.seed;
  out.eve.x_indices = rec.eve;

  // Private phase: n uniform packets.
  Rng source = Rng::stream(config.seed, {kSource, opts.layer});
  gf::Matrix x = uniform_matrix(field, config.n, L, source);

  // Initial discussion: receivers reveal their index sets; the sender groups
  // the packets by the exact set of receivers that got them.
  auto groups = partition_commonly_received(rec.honest, config.n);
  std::vector<bool> eve_got(config.n, false);
  for (std::uint32_t t : rec.eve) eve_got[t] = true;

  // Secure combinations per group. Within a group of n_S packets of which
  // Eve holds g_S, exactly n_S - g_S combinations independent of her view
  // exist; the MDS generator certifies that count against any selection,
  // the random generator is verified against the realized one.
  std::size_t h = 0;
  std::vector<std::uint32_t> y_owner_mask;  // group mask per y row
  gf::Matrix y_map(field, 0, config.n);
  gf::Matrix y(field, 0, L);
  struct Block {
    std::uint32_t mask;
    gf::Matrix coeffs;  // rows x n_S, local columns
    std::vector<std::uint32_t> cols;
  };
  std::vector<Block> blocks;
  for (auto& [mask, idx] : groups) {
    const std::size_t n_s = idx.size();
    std::vector<std::uint32_t> eve_local;
    for (std::size_t j = 0; j < n_s; ++j)
      if (eve_got[idx[j]]) eve_local.push_back(std::uint32_t(j));
    const std::size_t g_s = eve_local.size();
    const std::size_t rows = n_s - g_s;
    coding::SecureCombinationSpec spec{n_s, g_s, field};
    gf::Matrix coeffs(field, 0, 0);
    if (field.order() >= n_s + 1) {
      coeffs = coding::mds_secure_generator(spec);
      ++out.mds_subsets;
    } else {
      Rng ygen = Rng::stream(config.seed, {kYGen, opts.layer, mask});
      gf::Matrix eve_sel(field, g_s, n_s);
      for (std::size_t r = 0; r < g_s; ++r) eve_sel.at(r, eve_local[r]) = 1;
      bool ok = false;
      for (int attempt = 0; attempt < 16 && !ok; ++attempt) {
        coeffs = coding::random_secure_generator(spec, ygen);
        ok = gf::stack_rank(coeffs, eve_sel) == n_s;
      }
      if (!ok)
        throw ProtocolError("secure combination design failed after retries");
      ++out.random_subsets;
    }
    blocks.push_back(Block{mask, coeffs, idx});
    h += rows;
  }

  // Assemble the y packets and their public coefficient map.
  y_map = gf::Matrix(field, h, config.n);
  y = gf::Matrix(field, h, L);
  std::size_t row0 = 0;
  for (const Block& b : blocks) {
    const std::size_t rows = b.coeffs.rows();
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t j = 0; j < b.cols.size(); ++j)
        y_map.at(row0 + r, b.cols[j]) = b.coeffs.at(r, j);
      for (std::size_t j = 0; j < b.cols.size(); ++j) {
        const std::uint16_t f = b.coeffs.at(r, j);
        if (f) field.row_addmul(y.row(row0 + r), x.row(b.cols[j]), L, f);
      }
      y_owner_mask.push_back(b.mask);
    }
    row0 += rows;
  }

  // Which y rows each receiver can rebuild on its own.
  std::vector<std::vector<std::uint32_t>> y_received(receivers);
  for (std::uint32_t r = 0; r < h; ++r)
    for (std::size_t i = 0; i < receivers; ++i)
      if (y_owner_mask[r] >> i & 1) y_received[i].push_back(r);

  out.counts.n_star = 0;
  for (auto& [mask, idx] : groups) out.counts.n_star += idx.size();
  out.counts.h = h;
  out.counts.h_i.resize(receivers);
  std::size_t l = h;
  for (std::size_t i = 0; i < receivers; ++i) {
    out.counts.h_i[i] = y_received[i].size();
    l = std::min(l, y_received[i].size());
  }
  out.counts.l = l;

  // Reconciliation: h - l public combinations, checked to complete every
  // receiver's view, then key extraction on the completion of their span.
  Rng zgen = Rng::stream(config.seed, {kZGen, opts.layer});
  coding::ReconciliationPlan plan =
      coding::design_reconciliation(y_received, h, field, zgen);
  gf::Matrix z = plan.combinations * y;
  auto [key_coeffs, key] = coding::extract_key(plan.combinations, y);

  out.keys.reserve(config.m);
  out.keys.push_back(key);  // the sender's copy
  for (std::size_t i = 0; i < receivers; ++i) {
    // The receiver re-creates the y rows of its own groups from the
    // x-packets it holds (identical values, so they are taken as computed),
    // then solves the public combinations for the missing rows.
    std::vector<bool> got(h, false);
    for (std::uint32_t r : y_received[i]) got[r] = true;
    std::vector<std::uint32_t> missing;
    for (std::uint32_t r = 0; r < h; ++r)
      if (!got[r]) missing.push_back(r);
    gf::Matrix y_full(field, h, L);
    for (std::uint32_t r : y_received[i])
      std::copy(y.row(r), y.row(r) + L, y_full.row(r));
    if (!missing.empty()) {
      gf::Matrix c_m = plan.combinations.select_columns(missing);
      gf::Matrix rhs = z;  // z - C_R * Y_R
      for (std::uint32_t r : y_received[i]) {
        for (std::size_t zr = 0; zr < rhs.rows(); ++zr) {
          const std::uint16_t f = plan.combinations.at(zr, r);
          if (f) field.row_submul(rhs.row(zr), y.row(r), L, f);
        }
      }
      auto solved = gf::solve_unique(c_m, rhs);
      if (!solved)
        throw std::logic_error("reconciliation decode failed despite rank certificate");
      for (std::size_t k = 0; k < missing.size(); ++k)
        std::copy(solved->row(k), solved->row(k) + L, y_full.row(missing[k]));
    }
    out.keys.push_back(key_coeffs * y_full);
  }

  out.keys_agree = true;
  for (const auto& k : out.keys)
    if (!(k == out.keys.front())) out.keys_agree = false;

  out.eve.y_map = std::move(y_map);
  out.eve.z_coeffs = plan.combinations;
  out.eve.key_coeffs = std::move(key_coeffs);
  out.eve.z_packets = std::move(z);
  out.rate_bits_per_use =
      double(l) * double(L) * std::log2(double(config.q)) / double(config.n);
  if (opts.compute_leakage) out.leakage_bits = leakage_bits(out);
  return out;
}

double erasure_capacity(double delta, double delta_e, std::size_t packet_len,
                        std::uint32_t q) {
  return (1.0 - delta) * delta_e * double(packet_len) * std::log2(double(q));
}

double leakage_bits(const ProtocolOutcome& out) {
  const gf::Field& field = out.field;
  // Columns that can carry information: broadcast packets someone received.
  std::vector<bool> used(out.n, false);
  for (std::uint32_t t : out.eve.x_indices) used[t] = true;
  for (std::size_t c = 0; c < out.n; ++c)
    for (std::size_t r = 0; r < out.eve.y_map.rows() && !used[c]; ++r)
      if (out.eve.y_map.at(r, c)) used[c] = true;
  std::vector<std::uint32_t> cols;
  for (std::uint32_t c = 0; c < out.n; ++c)
    if (used[c]) cols.push_back(c);

  gf::Matrix key_map = (out.eve.key_coeffs * out.eve.y_map).select_columns(cols);
  gf::Matrix z_map = (out.eve.z_coeffs * out.eve.y_map).select_columns(cols);
  gf::Matrix eve_sel(field, out.eve.x_indices.size(), cols.size());
  {
    std::vector<std::uint32_t> pos(out.n, 0);
    for (std::size_t j = 0; j < cols.size(); ++j) pos[cols[j]] = std::uint32_t(j);
    for (std::size_t r = 0; r < out.eve.x_indices.size(); ++r)
      eve_sel.at(r, pos[out.eve.x_indices[r]]) = 1;
  }
  gf::Matrix view = gf::Matrix::vstack(eve_sel, z_map);
  const std::size_t rank_key = gf::rank(key_map);
  const std::size_t rank_view = gf::rank(view);
  const std::size_t rank_joint = gf::stack_rank(key_map, view);
  return double(rank_key + rank_view - rank_joint) * double(out.packet_len) *
         std::log2(double(field.order()));
}

}  // namespace skg::erasure
