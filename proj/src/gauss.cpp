#include "skg/gauss.hpp"

#include <cmath>
#include <stdexcept>

namespace skg::gauss {

double StateProfile::theta(std::size_t i) const {
  double t = 0.0;
  for (std::size_t j = 0; j < i && j < deltas.size(); ++j) t += deltas[j];
  return t;
}

void StateProfile::validate() const {
  if (deltas.empty()) throw std::invalid_argument("state distribution is empty");
  double sum = 0.0;
  for (double d : deltas) {
    if (d < 0.0) throw std::invalid_argument("state probabilities must be non-negative");
    sum += d;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("state probabilities must sum to 1");
}

void GainProfile::validate() const {
  if (gains.empty()) throw std::invalid_argument("gain profile is empty");
  if (gains.front() <= 0.0) throw std::invalid_argument("gains must be positive");
  for (std::size_t i = 1; i < gains.size(); ++i)
    if (!(gains[i] > gains[i - 1]))
      throw std::invalid_argument("gains must be strictly increasing");
  // p_max = 0 is admitted so the bound formulas can be evaluated at the
  // zero-budget boundary; the optimizer separately requires p_max > 0.
  if (!(p_max >= 0.0)) throw std::invalid_argument("p_max must be non-negative");
  if (block_len < 1) throw std::invalid_argument("block length must be positive");
}

std::vector<double> PowerAllocation::interference(double p_max) const {
  std::vector<double> I(powers.size() + 1, 0.0);
  for (std::size_t k = powers.size(); k-- > 1;) I[k] = I[k + 1] + powers[k];
  I[0] = p_max;
  return I;
}

PowerAllocation PowerAllocation::from_interference(const std::vector<double>& I) {
  PowerAllocation a;
  a.powers.resize(I.size() - 1);
  for (std::size_t i = 1; i < I.size(); ++i) a.powers[i - 1] = I[i - 1] - I[i];
  return a;
}

std::vector<double> layer_rates(const PowerAllocation& alloc, const GainProfile& gains,
                                RateConvention conv) {
  gains.validate();
  const std::size_t s = gains.s();
  if (alloc.powers.size() != s)
    throw std::invalid_argument("allocation and gains disagree on s");
  const double c = convention_factor(conv);
  std::vector<double> r(s);
  double interference = 0.0;
  for (std::size_t i = s; i >= 1; --i) {
    const double p = alloc.powers[i - 1];
    const double hi = gains.gains[i], lo = gains.gains[i - 1];
    r[i - 1] = c * (std::log2(1.0 + hi * p / (1.0 + hi * interference)) -
                    std::log2(1.0 + lo * p / (1.0 + lo * interference)));
    interference += p;
  }
  return r;
}

std::vector<double> layer_rates_interference(const std::vector<double>& I,
                                             const GainProfile& gains,
                                             RateConvention conv) {
  gains.validate();
  const std::size_t s = gains.s();
  if (I.size() != s + 1)
    throw std::invalid_argument("interference vector must have s+1 entries");
  const double c = convention_factor(conv);
  std::vector<double> r(s);
  for (std::size_t i = 1; i <= s; ++i) {
    const double hi = gains.gains[i], lo = gains.gains[i - 1];
    r[i - 1] = c * std::log2((1.0 + hi * I[i - 1]) / (1.0 + hi * I[i]) *
                             (1.0 + lo * I[i]) / (1.0 + lo * I[i - 1]));
  }
  return r;
}

double achievable_rate(const PowerAllocation& alloc, const GainProfile& gains,
                       const StateProfile& profile, RateConvention conv) {
  profile.validate();
  if (profile.s() != gains.s())
    throw std::invalid_argument("profile and gains disagree on s");
  const std::vector<double> r = layer_rates(alloc, gains, conv);
  double total = 0.0;
  for (std::size_t i = 1; i <= gains.s(); ++i)
    total += profile.Delta(i) * double(gains.block_len) * r[i - 1];
  return total;
}

double gauss_upper_bound(const GainProfile& gains, const StateProfile& profile,
                         RateConvention conv) {
  gains.validate();
  profile.validate();
  if (profile.s() != gains.s())
    throw std::invalid_argument("profile and gains disagree on s");
  const double c = convention_factor(conv);
  double total = 0.0;
  for (std::size_t i = 0; i <= gains.s(); ++i)
    for (std::size_t j = 0; j <= gains.s(); ++j)
      total += profile.deltas[i] * profile.deltas[j] *
               std::log2(1.0 + gains.gains[i] * gains.p_max /
                                   (1.0 + gains.gains[j] * gains.p_max));
  return c * double(gains.block_len) * total;
}

double dof(const StateProfile& profile, const std::vector<double>& gammas,
           std::size_t block_len) {
  profile.validate();
  if (gammas.size() != profile.deltas.size())
    throw std::invalid_argument("gamma exponents must have s+1 entries");
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] > 0.0)) throw std::invalid_argument("gamma exponents must be positive");
    if (i > 0 && !(gammas[i] > gammas[i - 1]))
      throw std::invalid_argument("gamma exponents must be strictly increasing");
  }
  double total = 0.0;
  for (std::size_t i = 1; i <= profile.s(); ++i)
    total += (gammas[i] - gammas[i - 1]) * profile.Delta(i);
  return double(block_len) * total;
}

double dof_upper(const StateProfile& profile, const std::vector<double>& gammas,
                 std::size_t block_len) {
  profile.validate();
  if (gammas.size() != profile.deltas.size())
    throw std::invalid_argument("gamma exponents must have s+1 entries");
  double total = 0.0;
  for (std::size_t i = 0; i < gammas.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      total += profile.deltas[i] * profile.deltas[j] * (gammas[i] - gammas[j]);
  return double(block_len) * total;
}

void merge_equal_states(std::vector<double>& gains, std::vector<double>& deltas,
                        double tol) {
  if (gains.size() != deltas.size())
    throw std::invalid_argument("gains and deltas must align");
  std::vector<double> g, d;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (!g.empty() && std::abs(gains[i] - g.back()) <= tol * std::max(1.0, g.back())) {
      d.back() += deltas[i];
    } else {
      g.push_back(gains[i]);
      d.push_back(deltas[i]);
    }
  }
  gains = std::move(g);
  deltas = std::move(d);
}

}  // namespace skg::gauss
