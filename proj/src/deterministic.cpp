#include "skg/deterministic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skg::det {
namespace {

void check(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

gf::Matrix subtract(const gf::Matrix& a, const gf::Matrix& b) {
  gf::Matrix r = a;
  const gf::Field& f = a.field();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      r.at(i, j) = std::uint16_t(f.sub(a.at(i, j), b.at(i, j)));
  return r;
}

void validate_deltas(const std::vector<double>& deltas, std::size_t states) {
  check(deltas.size() == states + 1, "state distribution must have s+1 entries");
  double sum = 0;
  for (double d : deltas) {
    check(d >= 0.0, "state probabilities must be non-negative");
    sum += d;
  }
  check(std::abs(sum - 1.0) <= 1e-12, "state probabilities must sum to 1");
}

// Maintains a row-reduced spanning set; insert() reports whether the row
// enlarged the span.
class SpanAccumulator {
 public:
  SpanAccumulator(gf::Field f, std::size_t cols) : field_(f), cols_(cols) {}

  bool insert(const std::uint16_t* row) {
    std::vector<std::uint16_t> v(row, row + cols_);
    for (const auto& [pivot, r] : rows_) {
      if (v[pivot]) field_.row_submul(v.data(), r.data(), cols_, v[pivot]);
    }
    std::size_t pivot = cols_;
    for (std::size_t c = 0; c < cols_; ++c)
      if (v[c]) {
        pivot = c;
        break;
      }
    if (pivot == cols_) return false;
    field_.row_scale(v.data(), cols_, field_.inv(v[pivot]));
    rows_.emplace_back(pivot, std::move(v));
    return true;
  }

  std::size_t size() const { return rows_.size(); }

 private:
  gf::Field field_;
  std::size_t cols_;
  std::vector<std::pair<std::size_t, std::vector<std::uint16_t>>> rows_;
};

}  // namespace

void DetChannelFamily::validate() const {
  check(!ranks.empty() && ranks.size() == maps.size(), "ranks and maps must align");
  const std::size_t s = states();
  check(s >= 1, "at least two channel states are required");
  check(ranks.front() == 0 && ranks.back() == dim, "r_0 = 0 and r_s = L required");
  for (std::size_t i = 1; i <= s; ++i)
    check(ranks[i - 1] <= ranks[i], "ranks must be non-decreasing");
  check(maps.back() == gf::Matrix::identity(field, dim), "F_s must be the identity");
  for (std::size_t i = 0; i <= s; ++i) {
    check(maps[i].rows() == dim && maps[i].cols() == dim, "maps must be L x L");
    check(gf::rank(maps[i]) == ranks[i], "stored rank disagrees with the map");
  }
  for (std::size_t i = 1; i <= s; ++i) {
    // ker F_i inside ker F_{i-1}
    gf::Matrix k = gf::null_space(maps[i]);
    gf::Matrix image = maps[i - 1] * k.transpose();
    for (std::size_t r = 0; r < image.rows(); ++r)
      for (std::size_t c = 0; c < image.cols(); ++c)
        check(image.at(r, c) == 0, "kernel nesting violated");
    const std::size_t diff_rank = gf::rank(subtract(maps[i], maps[i - 1]));
    check(diff_rank == ranks[i] - ranks[i - 1],
          "rank(F_i - F_{i-1}) must equal the rank difference");
  }
}

DetChannelFamily shift_family(std::size_t dim, std::uint32_t q,
                              const std::vector<std::size_t>& ranks) {
  check(!ranks.empty(), "rank sequence must be non-empty");
  check(ranks.front() == 0, "r_0 must be 0");
  check(ranks.back() == dim, "r_s must equal L");
  for (std::size_t i = 1; i < ranks.size(); ++i)
    check(ranks[i - 1] <= ranks[i], "ranks must be non-decreasing");
  DetChannelFamily fam(gf::Field::of_order(q));
  fam.dim = dim;
  fam.ranks = ranks;
  for (std::size_t r : ranks) {
    gf::Matrix f(fam.field, dim, dim);
    for (std::size_t i = 0; i < r; ++i) f.at(i, i) = 1;
    fam.maps.push_back(std::move(f));
  }
  return fam;
}

DetChannelFamily conjugated_family(const DetChannelFamily& fam, Rng& rng) {
  const std::size_t n = fam.dim;
  gf::Matrix t(fam.field, n, n);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        t.at(i, j) = std::uint16_t(rng.below(fam.field.order()));
    if (gf::rank(t) == n) break;
  }
  auto t_inv = gf::solve_unique(t, gf::Matrix::identity(fam.field, n));
  DetChannelFamily out(fam.field);
  out.dim = n;
  out.ranks = fam.ranks;
  for (const gf::Matrix& f : fam.maps) out.maps.push_back((*t_inv * f) * t);
  return out;
}

LayerDecomposition decompose_layers(const DetChannelFamily& fam) {
  const std::size_t s = fam.states();
  LayerDecomposition dec;
  gf::Matrix prev_kernel = gf::null_space(fam.maps[0]);  // the full space
  for (std::size_t i = 1; i <= s; ++i) {
    gf::Matrix kernel = gf::null_space(fam.maps[i]);
    SpanAccumulator acc(fam.field, fam.dim);
    for (std::size_t r = 0; r < kernel.rows(); ++r) acc.insert(kernel.row(r));
    gf::Matrix pi(fam.field, fam.ranks[i] - fam.ranks[i - 1], fam.dim);
    std::size_t taken = 0;
    for (std::size_t r = 0; r < prev_kernel.rows() && taken < pi.rows(); ++r) {
      if (acc.insert(prev_kernel.row(r))) {
        std::copy(prev_kernel.row(r), prev_kernel.row(r) + fam.dim, pi.row(taken));
        ++taken;
      }
    }
    if (taken != pi.rows())
      throw std::logic_error("layer completion failed; family is not nested");
    dec.layers.push_back(std::move(pi));
    prev_kernel = std::move(kernel);
  }
  return dec;
}

double det_capacity(const DetChannelFamily& fam, const std::vector<double>& deltas) {
  validate_deltas(deltas, fam.states());
  double theta = 0.0, total = 0.0;
  for (std::size_t i = 1; i <= fam.states(); ++i) {
    theta += deltas[i - 1];
    total += double(fam.ranks[i] - fam.ranks[i - 1]) * theta * (1.0 - theta);
  }
  return total * std::log2(double(fam.field.order()));
}

double det_upper_bound(const DetChannelFamily& fam, const std::vector<double>& deltas) {
  validate_deltas(deltas, fam.states());
  const std::size_t s = fam.states();
  std::vector<double> rho(s + 1);
  double theta = 0.0;
  for (std::size_t i = 0; i <= s; ++i) {
    const double kappa = 2.0 * deltas[i] * theta + deltas[i] * deltas[i];
    rho[i] = deltas[i] - kappa;
    theta += deltas[i];
  }
  double total = 0.0, weight = 0.0;
  for (std::size_t j = 1; j <= s; ++j) {
    weight += rho[j - 1];
    total += double(gf::rank(subtract(fam.maps[j], fam.maps[j - 1]))) * weight;
  }
  return total * std::log2(double(fam.field.order()));
}

LayeredOutcome run_layered_protocol(const DetChannelFamily& fam,
                                    const std::vector<double>& deltas, std::size_t m,
                                    std::size_t n, std::uint64_t seed,
                                    const erasure::RunOptions& opts) {
  fam.validate();
  validate_deltas(deltas, fam.states());
  check(m >= 2, "m must be at least 2");
  check(n >= 1, "n must be positive");
  const std::size_t s = fam.states();

  // theta_i = P(S < i): the erasure probability seen by layer i.
  std::vector<double> theta(s + 2, 0.0);
  for (std::size_t i = 1; i <= s + 1; ++i) theta[i] = theta[i - 1] + deltas[i - 1];

  // One state per receiver per time step (receiver 0 is Eve); layer i is
  // received iff the channel uniform clears theta_i.
  std::vector<std::vector<double>> uniforms(m);
  for (std::size_t r = 0; r < m; ++r) {
    Rng rng = erasure::channel_stream(seed, r);
    uniforms[r].resize(n);
    for (std::size_t t = 0; t < n; ++t) uniforms[r][t] = rng.next_double();
  }

  LayeredOutcome out;
  double bits = 0.0, leak = 0.0;
  for (std::size_t i = 1; i <= s; ++i) {
    const std::size_t d_i = fam.ranks[i] - fam.ranks[i - 1];
    if (d_i == 0) continue;
    erasure::ReceptionTable rec;
    rec.honest.resize(m - 1);
    for (std::size_t r = 1; r < m; ++r)
      for (std::uint32_t t = 0; t < n; ++t)
        if (uniforms[r][t] >= theta[i]) rec.honest[r - 1].push_back(t);
    for (std::uint32_t t = 0; t < n; ++t)
      if (uniforms[0][t] >= theta[i]) rec.eve.push_back(t);

    erasure::ErasureConfig cfg;
    cfg.m = m;
    cfg.n = n;
    cfg.packet_len = d_i;
    cfg.q = fam.field.order();
    cfg.delta = theta[i];
    cfg.delta_e = theta[i];
    cfg.seed = seed;
    erasure::RunOptions layer_opts = opts;
    layer_opts.layer = i;
    erasure::ProtocolOutcome layer = erasure::run_protocol(cfg, rec, layer_opts);
    bits += layer.rate_bits_per_use * double(n);
    if (layer.leakage_bits) leak += *layer.leakage_bits;
    out.keys_agree = out.keys_agree && layer.keys_agree;
    out.layer_dims.push_back(d_i);
    out.layers.push_back(std::move(layer));
  }
  out.rate_bits_per_use = bits / double(n);
  if (opts.compute_leakage) out.leakage_bits = leak;
  return out;
}

}  // namespace skg::det
