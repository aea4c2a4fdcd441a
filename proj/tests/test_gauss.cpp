#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "skg/gauss.hpp"
#include "skg/rng.hpp"

using namespace skg;
using gauss::GainProfile;
using gauss::PowerAllocation;
using gauss::RateConvention;
using gauss::StateProfile;

namespace {

GainProfile make_gains(std::vector<double> h, double p_max, std::size_t L = 1) {
  GainProfile g;
  g.gains = std::move(h);
  g.p_max = p_max;
  g.block_len = L;
  return g;
}

StateProfile make_profile(std::vector<double> d) {
  StateProfile p;
  p.deltas = std::move(d);
  return p;
}

}  // namespace

TEST_CASE("profile and gain validation") {
  CHECK_THROWS_AS(make_profile({0.5, 0.4}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_profile({-0.1, 1.1}).validate(), std::invalid_argument);
  make_profile({0.25, 0.75}).validate();
  CHECK_THROWS_AS(make_gains({1.0, 0.5}, 1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_gains({0.0, 0.5}, 1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_gains({0.1, 0.5}, -1).validate(), std::invalid_argument);
  make_gains({0.1, 0.5}, 2).validate();
}

TEST_CASE("theta and Delta derivations") {
  StateProfile p = make_profile({1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(p.theta(0) == 0.0);
  CHECK(p.theta(1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(p.theta(2) == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(p.Delta(1) == doctest::Approx(2.0 / 9).epsilon(1e-12));
  CHECK(p.Delta(2) == doctest::Approx(2.0 / 9).epsilon(1e-12));
}

TEST_CASE("layer rates: trivial shapes") {
  SUBCASE("vanishing low gain recovers the point-to-point rate") {
    GainProfile g = make_gains({1e-15, 2.0}, 5.0);
    PowerAllocation a;
    a.powers = {5.0};
    auto r = gauss::layer_rates(a, g);
    CHECK(r[0] == doctest::Approx(0.5 * std::log2(1 + 2.0 * 5.0)).epsilon(1e-9));
  }
  SUBCASE("zero power, zero rate") {
    GainProfile g = make_gains({0.1, 1.0, 10.0}, 10.0);
    PowerAllocation a;
    a.powers = {0.0, 0.0};
    for (double r : gauss::layer_rates(a, g)) CHECK(r == 0.0);
  }
  SUBCASE("rates are non-negative, strictly positive with power") {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t s = 1 + rng.below(4);
      std::vector<double> h;
      for (std::size_t i = 0; i <= s; ++i)
        h.push_back(std::pow(10.0, -2 + 4 * rng.next_double()));
      std::sort(h.begin(), h.end());
      bool distinct = true;
      for (std::size_t i = 1; i < h.size(); ++i)
        if (h[i] <= h[i - 1] * (1 + 1e-9)) distinct = false;
      if (!distinct) continue;
      GainProfile g = make_gains(h, 10.0);
      PowerAllocation a;
      double left = 10.0;
      for (std::size_t i = 0; i < s; ++i) {
        const double p = left * rng.next_double();
        a.powers.push_back(p);
        left -= p;
      }
      auto r = gauss::layer_rates(a, g);
      for (std::size_t i = 0; i < s; ++i) {
        CHECK(r[i] >= 0.0);
        if (a.powers[i] > 1e-12) CHECK(r[i] > 0.0);
      }
    }
  }
}

TEST_CASE("P-form and I-form rates agree to 1e-12") {
  GainProfile g = make_gains({0.1, 1.0, 10.0}, 10.0);
  PowerAllocation a;
  a.powers = {9.0, 1.0};
  auto rp = gauss::layer_rates(a, g);
  auto ri = gauss::layer_rates_interference(a.interference(10.0), g);
  REQUIRE(rp.size() == ri.size());
  for (std::size_t i = 0; i < rp.size(); ++i)
    CHECK(rp[i] == doctest::Approx(ri[i]).epsilon(1e-12));

  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> h;
    const std::size_t s = 1 + rng.below(4);
    for (std::size_t i = 0; i <= s; ++i)
      h.push_back(std::pow(10.0, -2 + 4 * rng.next_double()));
    std::sort(h.begin(), h.end());
    bool distinct = true;
    for (std::size_t i = 1; i < h.size(); ++i)
      if (h[i] <= h[i - 1] * (1 + 1e-9)) distinct = false;
    if (!distinct) continue;
    GainProfile gg = make_gains(h, 3.0);
    // the two forms coincide on the constraint surface sum P_i = p_max
    PowerAllocation aa;
    double sum = 0;
    for (std::size_t i = 0; i < s; ++i) sum += (aa.powers.emplace_back(rng.next_double()));
    for (double& p : aa.powers) p *= 3.0 / sum;
    auto r1 = gauss::layer_rates(aa, gg);
    auto r2 = gauss::layer_rates_interference(aa.interference(3.0), gg);
    for (std::size_t i = 0; i < r1.size(); ++i)
      CHECK(r1[i] == doctest::Approx(r2[i]).epsilon(1e-12));
  }
}

TEST_CASE("achievable rate values and degeneracies") {
  SUBCASE("all probability mass on one state kills every Delta") {
    GainProfile g = make_gains({0.1, 1.0, 10.0}, 10.0);
    PowerAllocation a;
    a.powers = {9.0, 1.0};
    CHECK(gauss::achievable_rate(a, g, make_profile({0, 1, 0})) == 0.0);
    CHECK(gauss::achievable_rate(a, g, make_profile({0, 0, 1})) == 0.0);
  }
  SUBCASE("documented uniform-thirds value against direct recomputation") {
    GainProfile g = make_gains({0.1, 1.0, 10.0}, 10.0);
    PowerAllocation a;
    a.powers = {9.0, 1.0};
    StateProfile p = make_profile({1.0 / 3, 1.0 / 3, 1.0 / 3});
    // independent spreadsheet-style evaluation
    const double i1 = 1.0;  // interference above layer 1
    const double r1 = 0.5 * (std::log2(1 + 1.0 * 9 / (1 + 1.0 * i1)) -
                             std::log2(1 + 0.1 * 9 / (1 + 0.1 * i1)));
    const double r2 =
        0.5 * (std::log2(1 + 10.0 * 1) - std::log2(1 + 1.0 * 1));
    const double want = (2.0 / 9) * r1 + (2.0 / 9) * r2;
    CHECK(gauss::achievable_rate(a, g, p) == doctest::Approx(want).epsilon(1e-12));
  }
  SUBCASE("vanishing budget, vanishing rate") {
    GainProfile g = make_gains({0.1, 1.0, 10.0}, 1e-12);
    PowerAllocation a;
    a.powers = {0.9e-12, 0.1e-12};
    CHECK(gauss::achievable_rate(a, g, make_profile({1.0 / 3, 1.0 / 3, 1.0 / 3})) <
          1e-11);
  }
  SUBCASE("complex convention doubles the rate") {
    GainProfile g = make_gains({0.1, 1.0, 10.0}, 10.0);
    PowerAllocation a;
    a.powers = {9.0, 1.0};
    StateProfile p = make_profile({1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(gauss::achievable_rate(a, g, p, RateConvention::kComplex) ==
          doctest::Approx(2 * gauss::achievable_rate(a, g, p)).epsilon(1e-12));
  }
}

TEST_CASE("upper bound values") {
  SUBCASE("vanishing budget gives zero") {
    GainProfile g = make_gains({0.5, 2.0}, 0.0);
    CHECK(gauss::gauss_upper_bound(g, make_profile({0.4, 0.6})) == 0.0);
  }
  SUBCASE("single state: bound positive while achievable is zero") {
    GainProfile g = make_gains({2.0}, 4.0);
    StateProfile p = make_profile({1.0});
    const double want = 0.5 * std::log2(1 + 2.0 * 4 / (1 + 2.0 * 4));
    CHECK(gauss::gauss_upper_bound(g, p) == doctest::Approx(want).epsilon(1e-12));
    PowerAllocation empty;
    CHECK(gauss::achievable_rate(empty, g, p) == 0.0);
  }
}

TEST_CASE("successive-decoding telescoping identity") {
  // With one common gain, the decodability rates sum to the sum-power rate.
  const double h = 3.7;
  PowerAllocation a;
  a.powers = {2.0, 1.0, 0.5};
  auto I = a.interference(3.5);
  double acc = 0.0;
  for (std::size_t i = 1; i <= 3; ++i)
    acc += 0.5 * std::log2(1 + h * a.powers[i - 1] / (1 + h * I[i]));
  CHECK(acc == doctest::Approx(0.5 * std::log2(1 + h * 3.5)).epsilon(1e-12));
}

TEST_CASE("degrees of freedom") {
  SUBCASE("documented limit value with gamma_0 -> 0") {
    StateProfile p = make_profile({1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(gauss::dof(p, {1e-12, 1.0, 2.0}, 1) ==
          doctest::Approx(4.0 / 9).epsilon(1e-9));
  }
  SUBCASE("s=1 maximized at delta_0 = 1/2") {
    const double gap = 1.5;
    auto value = [&](double d0) {
      return gauss::dof(make_profile({d0, 1 - d0}), {0.5, 0.5 + gap}, 1);
    };
    CHECK(value(0.5) > value(0.3));
    CHECK(value(0.5) > value(0.7));
    CHECK(value(0.5) == doctest::Approx(gap * 0.25).epsilon(1e-12));
  }
  SUBCASE("lower and upper DoF routes coincide on random inputs") {
    Rng rng(14);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t s = 1 + rng.below(5);
      std::vector<double> d(s + 1), gam(s + 1);
      double sum = 0;
      for (auto& x : d) sum += (x = rng.next_double() + 0.01);
      for (auto& x : d) x /= sum;
      double g = 0;
      for (auto& x : gam) x = (g += rng.next_double() + 0.01);
      const double lo = gauss::dof(make_profile(d), gam, 2);
      const double hi = gauss::dof_upper(make_profile(d), gam, 2);
      CHECK(lo == doctest::Approx(hi).epsilon(1e-12));
    }
  }
  SUBCASE("invalid exponents rejected") {
    StateProfile p = make_profile({0.5, 0.5});
    CHECK_THROWS_AS(gauss::dof(p, {1.0, 0.5}, 1), std::invalid_argument);
    CHECK_THROWS_AS(gauss::dof(p, {0.0, 1.0}, 1), std::invalid_argument);
  }
}

TEST_CASE("merging equal states is exact") {
  std::vector<double> gains = {0.5, 2.0, 2.0, 30.0};
  std::vector<double> deltas = {0.25, 0.25, 0.25, 0.25};
  gauss::merge_equal_states(gains, deltas, 1e-12);
  REQUIRE(gains.size() == 3);
  CHECK(deltas[1] == doctest::Approx(0.5).epsilon(1e-15));
  GainProfile g3 = make_gains(gains, 10.0);
  // the 4-state bound with the duplicate equals the merged 3-state bound
  const double merged = gauss::gauss_upper_bound(g3, make_profile(deltas));
  double direct = 0.0;
  {
    const std::vector<double> h = {0.5, 2.0, 2.0, 30.0};
    const std::vector<double> d = {0.25, 0.25, 0.25, 0.25};
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        direct += d[i] * d[j] * std::log2(1 + h[i] * 10.0 / (1 + h[j] * 10.0));
    direct *= 0.5;
  }
  CHECK(merged == doctest::Approx(direct).epsilon(1e-12));
}
