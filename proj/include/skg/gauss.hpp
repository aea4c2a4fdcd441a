#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace skg::gauss {

/// Real channels carry the 1/2 factor in every rate; complex channels drop
/// it (every rate doubles).
enum class RateConvention { kReal, kComplex };

inline double convention_factor(RateConvention c) {
  return c == RateConvention::kReal ? 0.5 : 1.0;
}

/// Distribution over the s+1 channel states; theta_i = P(S < i) is the
/// erasure probability of layer i and Delta_i = theta_i (1 - theta_i) its
/// secrecy weight.
struct StateProfile {
  std::vector<double> deltas;

  std::size_t s() const { return deltas.empty() ? 0 : deltas.size() - 1; }
  double theta(std::size_t i) const;  // i in [0 : s+1]
  double Delta(std::size_t i) const { return theta(i) * (1.0 - theta(i)); }
  void validate() const;
};

/// Strictly increasing linear-scale gains h_0 < ... < h_s, a power budget,
/// and the block length L.
struct GainProfile {
  std::vector<double> gains;
  double p_max = 1.0;
  std::size_t block_len = 1;  // L

  std::size_t s() const { return gains.empty() ? 0 : gains.size() - 1; }
  void validate() const;
};

/// Per-layer powers P_1..P_s; I_k = sum_{j>k} P_j is the interference seen
/// while decoding layer k.
struct PowerAllocation {
  std::vector<double> powers;

  /// I_0..I_s from a budget: I_0 = p_max regardless of slack in sum P_i.
  std::vector<double> interference(double p_max) const;
  static PowerAllocation from_interference(const std::vector<double>& interference);
};

/// Wiretap layer rates R_i in bits per symbol (Theorem-style P/I form).
std::vector<double> layer_rates(const PowerAllocation& alloc, const GainProfile& gains,
                                RateConvention conv = RateConvention::kReal);

/// The same rates written in the interference variables; agrees with
/// layer_rates to rounding.
std::vector<double> layer_rates_interference(const std::vector<double>& interference,
                                             const GainProfile& gains,
                                             RateConvention conv = RateConvention::kReal);

/// sum_i Delta_i L R_i, bits per channel use.
double achievable_rate(const PowerAllocation& alloc, const GainProfile& gains,
                       const StateProfile& profile,
                       RateConvention conv = RateConvention::kReal);

/// Public-discussion upper bound
/// (1/2) L sum_{i,j} delta_i delta_j log(1 + h_i P / (1 + h_j P)).
double gauss_upper_bound(const GainProfile& gains, const StateProfile& profile,
                         RateConvention conv = RateConvention::kReal);

/// Degrees of freedom L sum_i (gamma_i - gamma_{i-1}) Delta_i for gains that
/// scale as Q^{gamma_i}.
double dof(const StateProfile& profile, const std::vector<double>& gammas,
           std::size_t block_len);

/// The matching bound route L sum_{i>j} delta_i delta_j (gamma_i - gamma_j);
/// equal to dof() as an algebraic identity.
double dof_upper(const StateProfile& profile, const std::vector<double>& gammas,
                 std::size_t block_len);

/// Collapses adjacent states with equal gains (within tol) by adding their
/// probabilities; rates and bounds are invariant under this merge.
void merge_equal_states(std::vector<double>& gains_db_sorted_linear,
                        std::vector<double>& deltas, double tol);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace skg::gauss
