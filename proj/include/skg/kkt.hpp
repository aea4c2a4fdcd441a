#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "skg/gauss.hpp"
#include "skg/rng.hpp"

namespace skg::kkt {

/// alpha_k = (h_{k+1} - h_k) Delta_{k+1}, beta_k = (h_k - h_{k-1}) Delta_k,
/// and the numerator slope and constant of F^(1)_k: slope x + constant with
/// slope = h_{k+1} beta_k - h_{k-1} alpha_k and constant = -(alpha_k - beta_k).
struct F1Coeffs {
  double alpha = 0, beta = 0, slope = 0, constant = 0;
};
F1Coeffs f1_coeffs(std::size_t k, const gauss::GainProfile& gains,
                   const gauss::StateProfile& profile);

/// Root of the F^(1)_k numerator; nullopt when the numerator is constant.
/// Conventions: k = 0 returns p_max, k = s returns 0.
std::optional<double> f1_root(std::size_t k, const gauss::GainProfile& gains,
                              const gauss::StateProfile& profile);

/// Quadratic numerator a x^2 + b x + c of F^(2)_k for a merged run
/// I_k = ... = I_{k+l}.
struct QuadCoeffs {
  double a = 0, b = 0, c = 0;
};
QuadCoeffs f2_coeffs(std::size_t k, std::size_t l, const gauss::GainProfile& gains,
                     const gauss::StateProfile& profile);

/// Real roots of a quadratic (possibly degenerate to linear), ascending;
/// a near-zero discriminant collapses to a double root.
std::vector<double> quadratic_roots(const QuadCoeffs& q);

struct KktCandidate {
  std::vector<double> interference;  // I_0..I_s
  std::vector<double> powers;        // P_1..P_s
  std::vector<double> multipliers;   // lambda_1..lambda_s
  double rate = 0.0;                 // sum_i Delta_i R_i, real convention, L = 1
  double stationarity_residual = 0.0;
};

struct SolveOptions {
  /// Randomizes which undetermined index the recursion picks next; the
  /// candidate set is invariant to this choice.
  std::optional<std::uint64_t> pick_seed;
  /// Soft cap on explored recursion nodes; exceeding it only warns.
  std::size_t node_budget = 5'000'000;
};

/// Enumerates every solution of the KKT system for the layer power
/// allocation by the recursive interval-splitting dynamic program. Each
/// returned candidate satisfies stationarity, feasibility, complementary
/// slackness and dual feasibility; duplicates are merged.
std::vector<KktCandidate> solve_kkt(const gauss::GainProfile& gains,
                                    const gauss::StateProfile& profile,
                                    const SolveOptions& opts = {});

/// The rate-maximizing candidate.
KktCandidate optimize(const gauss::GainProfile& gains,
                      const gauss::StateProfile& profile,
                      const SolveOptions& opts = {});

/// Exhaustive search over the discretized feasible set (I_1 >= ... >=
/// I_{s-1} on a grid of the given resolution); the independent check of
/// optimize(). Practical for s <= 4.
struct GridResult {
  gauss::PowerAllocation alloc;
  double rate = 0.0;  // same normalization as KktCandidate::rate
};
GridResult grid_oracle(const gauss::GainProfile& gains,
                       const gauss::StateProfile& profile, std::size_t steps);

/// s = 2 closed form: P1 = p_max when alpha_1 < beta_1; P2 = p_max when
/// h_2 beta_1 < h_0 alpha_1; otherwise P2 = min(r1, p_max). Returns nullopt
/// on ties (margin 1e-9), which route to solve_kkt.
std::optional<gauss::PowerAllocation> lemma5_closed_form(
    const gauss::GainProfile& gains, const gauss::StateProfile& profile);

/// Objective sum_i Delta_i R_i evaluated from an interference vector
/// (real convention, per unit block length).
double rate_from_interference(const std::vector<double>& interference,
                              const gauss::GainProfile& gains,
                              const gauss::StateProfile& profile);

/// F^(1)_k evaluated at x, including the positive denominator.
double f1_value(std::size_t k, double x, const gauss::GainProfile& gains,
                const gauss::StateProfile& profile);

}  // namespace skg::kkt
