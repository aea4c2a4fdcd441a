#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "skg/secure_coding.hpp"

using namespace skg;
using coding::SecureCombinationSpec;
using gf::Field;
using gf::Matrix;

namespace {

// every way to pick n_e one-hot rows out of n positions
void for_each_selection(std::size_t n, std::size_t n_e,
                        const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> pick(n_e);
  for (std::size_t i = 0; i < n_e; ++i) pick[i] = i;
  if (n_e == 0) {
    fn(pick);
    return;
  }
  for (;;) {
    fn(pick);
    std::size_t i = n_e;
    while (i-- > 0) {
      if (pick[i] + (n_e - i) < n) {
        ++pick[i];
        for (std::size_t j = i + 1; j < n_e; ++j) pick[j] = pick[j - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
  }
}

Matrix selection_matrix(Field f, const std::vector<std::size_t>& pick, std::size_t n) {
  Matrix e(f, pick.size(), n);
  for (std::size_t r = 0; r < pick.size(); ++r) e.at(r, pick[r]) = 1;
  return e;
}

std::uint32_t next_prime_at_least(std::uint32_t n) {
  auto is_prime = [](std::uint32_t v) {
    if (v < 2) return false;
    for (std::uint32_t d = 2; d * d <= v; ++d)
      if (v % d == 0) return false;
    return true;
  };
  while (!is_prime(n)) ++n;
  return n;
}

}  // namespace

TEST_CASE("mds generator: trivial shapes") {
  Field f8 = Field::of_order(8);
  SUBCASE("n_e = 0 gives a full-rank square matrix") {
    Matrix a = coding::mds_secure_generator({4, 0, f8});
    CHECK(a.rows() == 4);
    CHECK(rank(a) == 4);
  }
  SUBCASE("n_e = n gives an empty matrix") {
    Matrix a = coding::mds_secure_generator({4, 4, f8});
    CHECK(a.rows() == 0);
  }
  SUBCASE("q < n + 1 is rejected") {
    Field f4 = Field::of_order(4);
    CHECK_THROWS_AS(coding::mds_secure_generator({4, 1, f4}), std::invalid_argument);
  }
}

TEST_CASE("mds generator: documented n=3, n_e=1, q=4 case") {
  Field f4 = Field::of_order(4);
  Matrix a = coding::mds_secure_generator({3, 1, f4});
  REQUIRE(a.rows() == 2);
  for (std::size_t i = 0; i < 3; ++i) {
    Matrix e = selection_matrix(f4, {i}, 3);
    CHECK(stack_rank(a, e) == 3);
  }
}

TEST_CASE("mds secrecy certificate exhaustively for n <= 6") {
  for (std::size_t n = 1; n <= 6; ++n) {
    const std::uint32_t q = next_prime_at_least(std::uint32_t(n) + 1);
    Field f = Field::of_order(q);
    for (std::size_t n_e = 0; n_e <= n; ++n_e) {
      Matrix a = coding::mds_secure_generator({n, n_e, f});
      CHECK(rank(a) == n - n_e);
      for_each_selection(n, n_e, [&](const std::vector<std::size_t>& pick) {
        Matrix e = selection_matrix(f, pick, n);
        CHECK(stack_rank(a, e) == n);
      });
    }
  }
}

TEST_CASE("random generator: monte-carlo failure rate at q = 2^16") {
  Field f = Field::of_order(65536);
  SecureCombinationSpec spec{10, 4, f};
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng = Rng::stream(seed, {77});
    Matrix a = coding::random_secure_generator(spec, rng);
    Matrix e = selection_matrix(f, {0, 3, 5, 9}, 10);
    if (stack_rank(a, e) != 10) ++failures;
  }
  CHECK(failures <= 10);  // <= 1% empirically; expectation is O(1/q)
}

TEST_CASE("random generator at q=2 fails sometimes and verification rejects") {
  Field f2 = Field::of_order(2);
  SecureCombinationSpec spec{4, 2, f2};
  int failures = 0, trials = 200;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(std::uint64_t(t), {78});
    Matrix a = coding::random_secure_generator(spec, rng);
    CHECK(a.rows() == 2);  // the operation still returns a matrix
    Matrix e = selection_matrix(f2, {1, 2}, 4);
    if (stack_rank(a, e) != 4) ++failures;
  }
  CHECK(failures > 0);
  CHECK(failures < trials);
}

TEST_CASE("reconciliation: trivial and forced cases") {
  Field f2 = Field::of_order(2);
  SUBCASE("single terminal receiving everything needs no rows") {
    Rng rng(1);
    auto plan = coding::design_reconciliation({{0, 1, 2}}, 3, f2, rng);
    CHECK(plan.combinations.rows() == 0);
  }
  SUBCASE("two terminals with singleton sets at q=2 force [1 1]") {
    Rng rng(3);
    auto plan = coding::design_reconciliation({{0}, {1}}, 2, f2, rng);
    REQUIRE(plan.combinations.rows() == 1);
    CHECK(plan.combinations.at(0, 0) == 1);
    CHECK(plan.combinations.at(0, 1) == 1);
  }
}

TEST_CASE("reconciliation certificate on random instances") {
  Field f = Field::of_order(256);
  Rng cfg(99);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t h = 8;
    std::vector<std::vector<std::uint32_t>> sets(3);
    for (auto& s : sets)
      for (std::uint32_t j = 0; j < h; ++j)
        if (cfg.bernoulli(0.6)) s.push_back(j);
    Rng rng = Rng::stream(trial, {5});
    std::size_t l = h;
    for (auto& s : sets) l = std::min(l, s.size());
    auto plan = coding::design_reconciliation(sets, h, f, rng);
    CHECK(plan.combinations.rows() == h - l);
    for (const auto& s : sets) {
      Matrix e(f, s.size(), h);
      for (std::size_t r = 0; r < s.size(); ++r) e.at(r, s[r]) = 1;
      CHECK(stack_rank(e, plan.combinations) == h);
    }
  }
}

TEST_CASE("reconciliation failure is signalled for pathological fields") {
  // q=2 with many overlapping constraints is unlikely to verify in 16 draws
  // of a 6x7 random binary matrix against 4 terminals missing disjoint sets;
  // engineer a case that cannot ever work: more missing rows than available
  // combination rows cannot happen by construction, so force retries via a
  // tiny field and many terminals with tiny sets.
  Field f2 = Field::of_order(2);
  std::vector<std::vector<std::uint32_t>> sets;
  for (std::uint32_t i = 0; i < 12; ++i) sets.push_back({i});
  Rng rng(0);
  bool threw = false;
  try {
    (void)coding::design_reconciliation(sets, 12, f2, rng, 2);
  } catch (const coding::ReconciliationError&) {
    threw = true;
  }
  CHECK(threw);
}

TEST_CASE("extract_key: trivial and certified cases") {
  Field f = Field::of_order(256);
  Rng rng(21);
  SUBCASE("empty a_z returns all packets") {
    Matrix y(f, 4, 3);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 3; ++j) y.at(i, j) = std::uint16_t(rng.below(256));
    auto [coeffs, key] = coding::extract_key(Matrix(f, 0, 4), y);
    CHECK(coeffs == Matrix::identity(f, 4));
    CHECK(key == y);
  }
  SUBCASE("square a_z leaves nothing") {
    Matrix y(f, 3, 2);
    auto [coeffs, key] = coding::extract_key(Matrix::identity(f, 3), y);
    CHECK(coeffs.rows() == 0);
    CHECK(key.rows() == 0);
  }
  SUBCASE("h=4, l=2 leakage certificate") {
    for (int trial = 0; trial < 20; ++trial) {
      Matrix az(f, 2, 4);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 4; ++j) az.at(i, j) = std::uint16_t(rng.below(256));
      if (rank(az) != 2) continue;
      Matrix y(f, 4, 5);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 5; ++j) y.at(i, j) = std::uint16_t(rng.below(256));
      auto [coeffs, key] = coding::extract_key(az, y);
      CHECK(coeffs.rows() == 2);
      CHECK(stack_rank(coeffs, az) == 4);
      // zero-leakage identity: rank sum equals joint rank
      CHECK(rank(coeffs) + rank(az) == stack_rank(coeffs, az));
      CHECK(key.rows() == 2);
    }
  }
  SUBCASE("rank-deficient a_z throws") {
    Matrix az(f, 2, 4);
    az.at(0, 0) = az.at(1, 0) = 1;
    CHECK_THROWS_AS(coding::extract_key(az, Matrix(f, 4, 1)), std::invalid_argument);
  }
}
