#include "skg/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace skg::kkt {
namespace {

constexpr double kLn2 = 0.6931471805599453;

void check_inputs(const gauss::GainProfile& gains, const gauss::StateProfile& profile) {
  gains.validate();
  profile.validate();
  if (gains.s() != profile.s())
    throw std::invalid_argument("gains and profile disagree on s");
  if (gains.s() < 1) throw std::invalid_argument("at least one layer is required");
  if (!(gains.p_max > 0.0)) throw std::invalid_argument("p_max must be positive");
}

}  // namespace

F1Coeffs f1_coeffs(std::size_t k, const gauss::GainProfile& gains,
                   const gauss::StateProfile& profile) {
  check_inputs(gains, profile);
  if (k < 1 || k > gains.s() - 1)
    throw std::out_of_range("f1_coeffs needs 1 <= k <= s-1");
  F1Coeffs c;
  c.alpha = (gains.gains[k + 1] - gains.gains[k]) * profile.Delta(k + 1);
  c.beta = (gains.gains[k] - gains.gains[k - 1]) * profile.Delta(k);
  c.slope = gains.gains[k + 1] * c.beta - gains.gains[k - 1] * c.alpha;
  c.constant = -(c.alpha - c.beta);
  return c;
}

std::optional<double> f1_root(std::size_t k, const gauss::GainProfile& gains,
                              const gauss::StateProfile& profile) {
  if (k == 0) return gains.p_max;
  if (k == gains.s()) return 0.0;
  const F1Coeffs c = f1_coeffs(k, gains, profile);
  const double scale = std::max({1e-300, gains.gains[k + 1] * c.beta,
                                 gains.gains[k - 1] * c.alpha});
  if (std::abs(c.slope) <= 1e-14 * scale) return std::nullopt;  // constant numerator
  return -c.constant / c.slope;
}

double f1_value(std::size_t k, double x, const gauss::GainProfile& gains,
                const gauss::StateProfile& profile) {
  const F1Coeffs c = f1_coeffs(k, gains, profile);
  const double num = c.slope * x + c.constant;
  const double den = kLn2 * (1.0 + gains.gains[k - 1] * x) * (1.0 + gains.gains[k] * x) *
                     (1.0 + gains.gains[k + 1] * x);
  return 0.5 * num / den;
}

QuadCoeffs f2_coeffs(std::size_t k, std::size_t l, const gauss::GainProfile& gains,
                     const gauss::StateProfile& profile) {
  check_inputs(gains, profile);
  if (k < 1 || l < 1 || k + l + 1 > gains.s())
    throw std::out_of_range("f2_coeffs needs 1 <= k and k + l + 1 <= s");
  const double hk = gains.gains[k], hk1 = gains.gains[k - 1];
  const double hu = gains.gains[k + l], hu1 = gains.gains[k + l + 1];
  const double a_low = profile.Delta(k) * (hk - hk1);
  const double a_high = profile.Delta(k + l + 1) * (hu1 - hu);
  QuadCoeffs q;
  q.a = a_low * hu * hu1 - a_high * hk1 * hk;
  q.b = a_low * (hu + hu1) - a_high * (hk1 + hk);
  q.c = a_low - a_high;
  return q;
}

std::vector<double> quadratic_roots(const QuadCoeffs& q) {
  const double scale = std::max({1.0, std::abs(q.a), std::abs(q.b), std::abs(q.c)});
  if (std::abs(q.a) <= 1e-300 || std::abs(q.a) <= 1e-16 * scale) {
    if (std::abs(q.b) <= 1e-16 * scale) return {};
    return {-q.c / q.b};
  }
  const double disc = q.b * q.b - 4.0 * q.a * q.c;
  const double disc_tol = 1e-14 * std::max(1.0, q.b * q.b + std::abs(4.0 * q.a * q.c));
  if (disc < -disc_tol) return {};
  if (disc <= disc_tol) return {-q.b / (2.0 * q.a)};
  const double sq = std::sqrt(disc);
  const double t = -0.5 * (q.b + (q.b >= 0 ? sq : -sq));
  double r1 = t / q.a;
  double r2 = q.c / t;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

double rate_from_interference(const std::vector<double>& interference,
                              const gauss::GainProfile& gains,
                              const gauss::StateProfile& profile) {
  const std::vector<double> r =
      gauss::layer_rates_interference(interference, gains, gauss::RateConvention::kReal);
  double total = 0.0;
  for (std::size_t i = 1; i <= gains.s(); ++i) total += profile.Delta(i) * r[i - 1];
  return total;
}

namespace {

// One maximal run of equal interference values: indices [lo, hi] share one
// value constrained to [min, max]; determined runs have min == max.
struct Group {
  std::size_t lo, hi;
  double min, max;
  bool determined;
};

struct Solver {
  const gauss::GainProfile& gains;
  const gauss::StateProfile& profile;
  double p_max;
  std::size_t s;
  std::optional<Rng> pick_rng;
  std::size_t node_budget = 0;
  std::size_t nodes = 0;
  bool warned = false;
  std::vector<std::vector<double>> solutions = {};  // raw I vectors

  // Numerator of the stationarity function governing an undetermined group:
  // F^(1) for singletons, F^(2) for merged runs.
  void numerator(const Group& g, double& a, double& b, double& c) const {
    if (g.lo == g.hi) {
      const F1Coeffs f1 = f1_coeffs(g.lo, gains, profile);
      a = 0.0;
      b = f1.slope;
      c = f1.constant;
    } else {
      const QuadCoeffs f2 = f2_coeffs(g.lo, g.hi - g.lo, gains, profile);
      a = f2.a;
      b = f2.b;
      c = f2.c;
    }
  }

  static bool propagate(std::vector<Group>& gs) {
    for (std::size_t j = 1; j < gs.size(); ++j)
      gs[j].max = std::min(gs[j].max, gs[j - 1].max);
    for (std::size_t j = gs.size() - 1; j-- > 0;)
      gs[j].min = std::max(gs[j].min, gs[j + 1].min);
    for (const Group& g : gs)
      if (g.min > g.max + 1e-12 * std::max(1.0, g.min)) return false;
    return true;
  }

  // Merges group j with its neighbor and intersects the group's value
  // interval with [lo_bound, hi_bound]; returns the shrunk group list or
  // nothing when the merge is inconsistent.
  std::optional<std::vector<Group>> merged(const std::vector<Group>& gs, std::size_t j,
                                           bool left, double lo_bound,
                                           double hi_bound) const {
    const std::size_t o = left ? j - 1 : j + 1;
    const Group& g = gs[j];
    const Group& other = gs[o];
    const double tol = 1e-12 * std::max(1.0, p_max);
    Group m;
    m.lo = std::min(g.lo, other.lo);
    m.hi = std::max(g.hi, other.hi);
    m.min = std::max({g.min, other.min, lo_bound});
    m.max = std::min({g.max, other.max, hi_bound});
    m.determined = other.determined;
    if (m.min > m.max + tol) return std::nullopt;
    if (m.determined) {
      // the run takes the neighbor's pinned value
      m.min = other.min;
      m.max = other.max;
    }
    std::vector<Group> out;
    out.reserve(gs.size() - 1);
    for (std::size_t i = 0; i < gs.size(); ++i) {
      if (i == j) continue;
      if (i == o)
        out.push_back(m);
      else
        out.push_back(gs[i]);
    }
    return out;
  }

  static std::vector<Group> determined_at(const std::vector<Group>& gs, std::size_t j,
                                          double v) {
    std::vector<Group> out = gs;
    out[j].min = out[j].max = v;
    out[j].determined = true;
    return out;
  }

  void finalize(const std::vector<Group>& gs) {
    std::vector<double> I(s + 1, 0.0);
    for (const Group& g : gs)
      for (std::size_t i = g.lo; i <= g.hi; ++i) I[i] = g.min;
    I[0] = p_max;
    I[s] = 0.0;
    for (std::size_t k = 1; k <= s; ++k)
      if (I[k] > I[k - 1] + 1e-9 * std::max(1.0, p_max)) return;
    solutions.push_back(std::move(I));
  }

  void recurse(std::vector<Group> gs) {
    if (++nodes > node_budget && !warned) {
      std::fprintf(stderr,
                   "skg: kkt enumeration exceeded %zu nodes; continuing\n",
                   node_budget);
      warned = true;
    }
    if (!propagate(gs)) return;
    std::vector<std::size_t> open;
    for (std::size_t j = 0; j < gs.size(); ++j)
      if (!gs[j].determined) open.push_back(j);
    if (open.empty()) {
      finalize(gs);
      return;
    }
    std::size_t j = open.front();
    if (pick_rng) j = open[pick_rng->below(std::uint32_t(open.size()))];
    const Group g = gs[j];

    double qa, qb, qc;
    numerator(g, qa, qb, qc);
    auto num_at = [&](double x) { return (qa * x + qb) * x + qc; };
    const double span_scale = std::max(1.0, p_max);
    const double tol = 1e-12 * span_scale;
    const bool flat = qa == 0.0 && qb == 0.0 && qc == 0.0;

    if (flat) {
      // Identically zero stationarity (vanishing Delta weights): the rate is
      // flat in this value, so the two merges enumerate representatives.
      if (auto next = merged(gs, j, /*left=*/true, g.min, g.max))
        recurse(std::move(*next));
      if (auto next = merged(gs, j, /*left=*/false, g.min, g.max))
        recurse(std::move(*next));
      return;
    }

    if (g.max - g.min <= tol) {
      // Pinched by propagation: the value is forced; explore every outcome
      // and let the exact KKT filter keep the consistent ones.
      recurse(determined_at(gs, j, g.min));
      if (auto next = merged(gs, j, /*left=*/true, g.min, g.max))
        recurse(std::move(*next));
      if (auto next = merged(gs, j, /*left=*/false, g.min, g.max))
        recurse(std::move(*next));
      return;
    }

    std::vector<double> cuts;
    for (double r : quadratic_roots(QuadCoeffs{qa, qb, qc}))
      if (r >= g.min - tol && r <= g.max + tol)
        cuts.push_back(std::clamp(r, g.min, g.max));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [&](double x, double y) { return std::abs(x - y) <= tol; }),
               cuts.end());

    // Root branches: the group value sits exactly at a stationarity root
    // with no merge forced.
    for (double r : cuts) recurse(determined_at(gs, j, r));

    // Sign branches: on each maximal root-free subinterval the numerator
    // keeps one sign, and complementary slackness forces a merge.
    std::vector<double> ends;
    ends.push_back(g.min);
    for (double r : cuts) ends.push_back(r);
    ends.push_back(g.max);
    for (std::size_t t = 0; t + 1 < ends.size(); ++t) {
      const double lo = ends[t], hi = ends[t + 1];
      if (hi - lo <= tol) continue;
      const double sign = num_at(0.5 * (lo + hi));
      if (sign <= 0.0) {
        // F < 0 => lambda of the left edge > 0 => merge with the left group
        if (auto next = merged(gs, j, /*left=*/true, lo, hi)) recurse(std::move(*next));
      }
      if (sign >= 0.0) {
        // F > 0 => lambda of the right edge > 0 => merge with the right group
        if (auto next = merged(gs, j, /*left=*/false, lo, hi)) recurse(std::move(*next));
      }
    }
  }
};

// Recover multipliers from the stationarity chain and reject candidates that
// violate dual feasibility or stationarity. Returns false to drop.
bool verify_candidate(const std::vector<double>& I, const gauss::GainProfile& gains,
                      const gauss::StateProfile& profile, KktCandidate& out) {
  const std::size_t s = gains.s();
  const double p_max = gains.p_max;
  const double strict_eps = 1e-9 * std::max(1.0, p_max);

  std::vector<double> F(s, 0.0);  // F[k-1] = F^(1)_k(I_k), k in [1:s-1]
  for (std::size_t k = 1; k < s; ++k) F[k - 1] = f1_value(k, I[k], gains, profile);

  // lambda_k = lambda_s - suffix_k with suffix_k = sum_{i=k}^{s-1} F_i.
  std::vector<double> suffix(s + 2, 0.0);
  for (std::size_t k = s; k-- > 1;) suffix[k] = suffix[k + 1] + F[k - 1];

  double lambda_s = 0.0;
  bool pinned = false;
  double residual = 0.0;
  double f_scale = 1.0;
  for (double f : F) f_scale = std::max(f_scale, std::abs(f));
  for (std::size_t k = 1; k <= s; ++k) {
    const bool slack = I[k] < I[k - 1] - strict_eps;
    if (!slack) continue;
    const double implied = suffix[k];  // lambda_k = 0 => lambda_s = suffix_k
    if (!pinned) {
      lambda_s = implied;
      pinned = true;
    } else {
      residual = std::max(residual, std::abs(implied - lambda_s));
    }
  }
  if (!pinned) lambda_s = 0.0;  // fully merged chain (p_max == 0 edge)

  std::vector<double> lambda(s + 1, 0.0);
  for (std::size_t k = 1; k <= s; ++k) {
    double v = lambda_s - suffix[k];
    if (std::abs(v) < 1e-12) v = 0.0;
    lambda[k] = v;
  }
  for (std::size_t k = 1; k <= s; ++k)
    if (lambda[k] < -1e-9 * f_scale) return false;
  if (residual > 1e-10 * f_scale) return false;

  out.interference = I;
  out.powers.resize(s);
  for (std::size_t i = 1; i <= s; ++i) out.powers[i - 1] = I[i - 1] - I[i];
  for (double& p : out.powers)
    if (p < 0.0 && p > -1e-9 * std::max(1.0, p_max)) p = 0.0;
  out.multipliers.assign(lambda.begin() + 1, lambda.end());
  out.rate = rate_from_interference(I, gains, profile);
  out.stationarity_residual = residual;
  return true;
}

}  // namespace

std::vector<KktCandidate> solve_kkt(const gauss::GainProfile& gains,
                                    const gauss::StateProfile& profile,
                                    const SolveOptions& opts) {
  check_inputs(gains, profile);
  const std::size_t s = gains.s();
  const double p_max = gains.p_max;

  std::vector<std::vector<double>> raw;
  if (s == 1) {
    raw.push_back({p_max, 0.0});
  } else {
    Solver solver{gains, profile, p_max, s, std::nullopt, opts.node_budget};
    if (opts.pick_seed) solver.pick_rng = Rng(*opts.pick_seed);
    std::vector<Group> init;
    init.push_back(Group{0, 0, p_max, p_max, true});
    for (std::size_t i = 1; i <= s - 1; ++i)
      init.push_back(Group{i, i, 0.0, p_max, false});
    init.push_back(Group{s, s, 0.0, 0.0, true});
    solver.recurse(std::move(init));
    raw = std::move(solver.solutions);
  }

  std::vector<KktCandidate> out;
  for (const auto& I : raw) {
    KktCandidate cand;
    if (verify_candidate(I, gains, profile, cand)) out.push_back(std::move(cand));
  }
  // dedupe on the interference vector
  std::sort(out.begin(), out.end(), [](const KktCandidate& a, const KktCandidate& b) {
    return a.interference < b.interference;
  });
  const double tol = 1e-9 * std::max(1.0, p_max);
  out.erase(std::unique(out.begin(), out.end(),
                        [&](const KktCandidate& a, const KktCandidate& b) {
                          for (std::size_t i = 0; i < a.interference.size(); ++i)
                            if (std::abs(a.interference[i] - b.interference[i]) > tol)
                              return false;
                          return true;
                        }),
            out.end());
  if (out.empty())
    throw std::logic_error("KKT enumeration produced no feasible candidate");
  return out;
}

KktCandidate optimize(const gauss::GainProfile& gains, const gauss::StateProfile& profile,
                      const SolveOptions& opts) {
  std::vector<KktCandidate> cands = solve_kkt(gains, profile, opts);
  std::size_t best = 0;
  for (std::size_t i = 1; i < cands.size(); ++i)
    if (cands[i].rate > cands[best].rate) best = i;
  return cands[best];
}

GridResult grid_oracle(const gauss::GainProfile& gains, const gauss::StateProfile& profile,
                       std::size_t steps) {
  check_inputs(gains, profile);
  const std::size_t s = gains.s();
  if (s > 4) throw std::invalid_argument("grid_oracle supports s <= 4");
  if (steps == 0) throw std::invalid_argument("grid resolution must be positive");
  const double h = gains.p_max / double(steps);

  std::vector<double> I(s + 1, 0.0);
  I[0] = gains.p_max;
  I[s] = 0.0;
  GridResult best;
  best.rate = -1.0;
  std::vector<double> current;

  // nested descent over I_1 >= I_2 >= ... >= I_{s-1} on the grid
  auto eval = [&]() {
    const double r = rate_from_interference(I, gains, profile);
    if (r > best.rate) {
      best.rate = r;
      current = I;
    }
  };
  if (s == 1) {
    eval();
  } else if (s == 2) {
    for (std::size_t a = 0; a <= steps; ++a) {
      I[1] = double(a) * h;
      eval();
    }
  } else if (s == 3) {
    for (std::size_t a = 0; a <= steps; ++a) {
      I[1] = double(a) * h;
      for (std::size_t b = 0; b <= a; ++b) {
        I[2] = double(b) * h;
        eval();
      }
    }
  } else {
    for (std::size_t a = 0; a <= steps; ++a) {
      I[1] = double(a) * h;
      for (std::size_t b = 0; b <= a; ++b) {
        I[2] = double(b) * h;
        for (std::size_t c = 0; c <= b; ++c) {
          I[3] = double(c) * h;
          eval();
        }
      }
    }
  }
  best.alloc = gauss::PowerAllocation::from_interference(current);
  return best;
}

std::optional<gauss::PowerAllocation> lemma5_closed_form(
    const gauss::GainProfile& gains, const gauss::StateProfile& profile) {
  check_inputs(gains, profile);
  if (gains.s() != 2) throw std::invalid_argument("lemma5_closed_form needs s = 2");
  const F1Coeffs c = f1_coeffs(1, gains, profile);
  const double scale = std::max({1.0, std::abs(c.alpha), std::abs(c.beta)});
  const double hcmp = gains.gains[2] * c.beta - gains.gains[0] * c.alpha;
  const double hscale =
      std::max({1.0, gains.gains[2] * c.beta, gains.gains[0] * c.alpha});
  if (std::abs(c.alpha - c.beta) <= 1e-9 * scale) return std::nullopt;
  if (std::abs(hcmp) <= 1e-9 * hscale) return std::nullopt;

  gauss::PowerAllocation a;
  a.powers.assign(2, 0.0);
  if (c.alpha < c.beta) {
    a.powers[0] = gains.p_max;  // P1 = p_max
  } else if (hcmp < 0.0) {
    a.powers[1] = gains.p_max;  // P2 = p_max
  } else {
    const double r1 = (c.alpha - c.beta) / hcmp;
    a.powers[1] = std::min(r1, gains.p_max);
    a.powers[0] = gains.p_max - a.powers[1];
  }
  return a;
}

}  // namespace skg::kkt
