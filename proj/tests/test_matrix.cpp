#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "skg/matrix.hpp"
#include "skg/rng.hpp"

using skg::Rng;
using skg::gf::Field;
using skg::gf::Matrix;

namespace {

Matrix random_matrix(Field f, std::size_t r, std::size_t c, Rng& rng) {
  Matrix m(f, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      m.at(i, j) = std::uint16_t(rng.below(f.order()));
  return m;
}

// Laplace-expansion determinant, independent of the elimination code.
std::uint32_t det_laplace(const Matrix& m, std::vector<std::size_t> rows,
                          std::vector<std::size_t> cols) {
  const Field& f = m.field();
  if (rows.size() == 1) return m.at(rows[0], cols[0]);
  std::uint32_t acc = 0;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const std::uint32_t a = m.at(rows[0], cols[k]);
    if (a == 0) continue;
    std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
    std::vector<std::size_t> sub_cols;
    for (std::size_t j = 0; j < cols.size(); ++j)
      if (j != k) sub_cols.push_back(cols[j]);
    std::uint32_t minor = det_laplace(m, sub_rows, sub_cols);
    std::uint32_t term = f.mul(a, minor);
    acc = (k % 2 == 0) ? f.add(acc, term) : f.sub(acc, term);
  }
  return acc;
}

// Rank oracle: largest k with a non-vanishing k x k minor (dims <= 5).
std::size_t rank_by_minors(const Matrix& m) {
  const std::size_t n = std::min(m.rows(), m.cols());
  std::size_t best = 0;
  std::vector<std::size_t> ridx, cidx;
  for (std::size_t k = 1; k <= n; ++k) {
    // enumerate k-subsets of rows and columns
    std::vector<std::size_t> rs(k), cs(k);
    bool found = false;
    auto next_subset = [](std::vector<std::size_t>& v, std::size_t limit) {
      std::size_t i = v.size();
      while (i-- > 0) {
        if (v[i] + (v.size() - i) < limit + 0) {
          ++v[i];
          for (std::size_t j = i + 1; j < v.size(); ++j) v[j] = v[j - 1] + 1;
          return true;
        }
      }
      return false;
    };
    for (std::size_t i = 0; i < k; ++i) rs[i] = i;
    do {
      for (std::size_t i = 0; i < k; ++i) cs[i] = i;
      do {
        if (det_laplace(m, rs, cs) != 0) {
          found = true;
          break;
        }
      } while (next_subset(cs, m.cols()));
      if (found) break;
    } while (next_subset(rs, m.rows()));
    if (found)
      best = k;
    else
      break;
  }
  return best;
}

}  // namespace

TEST_CASE("rank of trivial matrices") {
  Field f2 = Field::of_order(2);
  CHECK(rank(Matrix(f2, 3, 3)) == 0);
  Field f5 = Field::of_order(5);
  CHECK(rank(Matrix::identity(f5, 4)) == 4);
}

TEST_CASE("rank agrees with the minor-expansion oracle") {
  Rng rng(42);
  Field f7 = Field::of_order(7);
  for (int trial = 0; trial < 40; ++trial) {
    Matrix m = random_matrix(f7, 5, 3, rng);
    CHECK(rank(m) == rank_by_minors(m));
  }
  Field f4 = Field::of_order(4);
  for (int trial = 0; trial < 40; ++trial) {
    Matrix m = random_matrix(f4, 4, 5, rng);
    CHECK(rank(m) == rank_by_minors(m));
  }
}

TEST_CASE("rank equals rank of the transpose") {
  Rng rng(7);
  for (std::uint32_t q : {2u, 9u, 251u, 65536u}) {
    Field f = Field::of_order(q);
    for (int trial = 0; trial < 20; ++trial) {
      Matrix m = random_matrix(f, 1 + rng.below(8), 1 + rng.below(8), rng);
      CHECK(rank(m) == rank(m.transpose()));
    }
  }
}

TEST_CASE("stack_rank basics and the concatenation oracle") {
  Field f2 = Field::of_order(2);
  Matrix a(f2, 1, 2), b(f2, 1, 2);
  a.at(0, 0) = 1;
  b.at(0, 1) = 1;
  CHECK(stack_rank(a, b) == 2);
  Matrix c(f2, 1, 2), d(f2, 1, 2);
  c.at(0, 0) = c.at(0, 1) = 1;
  d.at(0, 0) = d.at(0, 1) = 1;
  CHECK(stack_rank(c, d) == 1);

  Rng rng(3);
  Field f16 = Field::of_order(16);
  for (int trial = 0; trial < 25; ++trial) {
    Matrix x = random_matrix(f16, 2, 4, rng);
    Matrix y = random_matrix(f16, 3, 4, rng);
    CHECK(stack_rank(x, y) == rank(Matrix::vstack(x, y)));
    CHECK(stack_rank(x, y) <= rank(x) + rank(y));
  }

  Matrix bad(f2, 1, 3);
  CHECK_THROWS_AS(stack_rank(a, bad), std::invalid_argument);
}

TEST_CASE("solve_in_rowspan identity, unsolvable, and multiply-back") {
  Field f2 = Field::of_order(2);
  Matrix id = Matrix::identity(f2, 3);
  std::vector<std::uint16_t> e2 = {0, 1, 0};
  auto c = solve_in_rowspan(id, e2);
  REQUIRE(c.has_value());
  CHECK(*c == e2);

  Matrix rank1(f2, 2, 3);
  rank1.at(0, 0) = rank1.at(0, 1) = 1;
  rank1.at(1, 0) = rank1.at(1, 1) = 1;  // duplicate row
  std::vector<std::uint16_t> outside = {1, 0, 0};
  CHECK_FALSE(solve_in_rowspan(rank1, outside).has_value());

  Rng rng(11);
  Field f256 = Field::of_order(256);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix basis = random_matrix(f256, 4, 6, rng);
    // target = random combination of the rows
    std::vector<std::uint16_t> w(4), t(6, 0);
    for (auto& x : w) x = std::uint16_t(rng.below(256));
    for (std::size_t i = 0; i < 4; ++i)
      basis.field().row_addmul(t.data(), basis.row(i), 6, w[i]);
    auto sol = solve_in_rowspan(basis, t);
    REQUIRE(sol.has_value());
    // multiply back
    std::vector<std::uint16_t> back(6, 0);
    for (std::size_t i = 0; i < 4; ++i)
      basis.field().row_addmul(back.data(), basis.row(i), 6, (*sol)[i]);
    CHECK(back == t);
  }
}

TEST_CASE("complete_basis trivial, exhaustive GF(2) case, and property") {
  Field f2 = Field::of_order(2);

  SUBCASE("empty input yields the identity") {
    Matrix empty(f2, 0, 4);
    Matrix k = complete_basis(empty);
    CHECK(k == Matrix::identity(f2, 4));
  }
  SUBCASE("square full-rank input yields no rows") {
    Matrix k = complete_basis(Matrix::identity(f2, 3));
    CHECK(k.rows() == 0);
  }
  SUBCASE("the documented 2x3 example") {
    Matrix az(f2, 2, 3);
    az.at(0, 0) = az.at(0, 1) = 1;
    az.at(1, 1) = az.at(1, 2) = 1;
    Matrix k = complete_basis(az);
    REQUIRE(k.rows() == 1);
    CHECK(stack_rank(k, az) == 3);
    // oracle: some of the 7 nonzero GF(2)^3 vectors completes the basis,
    // and ours is among them
    int completions = 0;
    bool ours_found = false;
    for (std::uint32_t v = 1; v < 8; ++v) {
      Matrix cand(f2, 1, 3);
      for (int j = 0; j < 3; ++j) cand.at(0, j) = (v >> j) & 1;
      if (stack_rank(cand, az) == 3) {
        ++completions;
        if (cand == k) ours_found = true;
      }
    }
    CHECK(completions > 0);
    CHECK(ours_found);
  }
  SUBCASE("rank-deficient input throws") {
    Matrix az(f2, 2, 3);
    az.at(0, 0) = az.at(1, 0) = 1;
    CHECK_THROWS_AS(complete_basis(az), std::invalid_argument);
  }
  SUBCASE("completion property on random inputs") {
    Rng rng(5);
    for (std::uint32_t q : {2u, 16u, 256u}) {
      Field f = Field::of_order(q);
      for (int trial = 0; trial < 20; ++trial) {
        const std::size_t cols = 2 + rng.below(6);
        const std::size_t rows = rng.below(std::uint32_t(cols) + 1);
        Matrix az = random_matrix(f, rows, cols, rng);
        if (rank(az) != rows) continue;
        Matrix k = complete_basis(az);
        CHECK(k.rows() + az.rows() == cols);
        CHECK(stack_rank(k, az) == cols);
      }
    }
  }
}

TEST_CASE("null_space rows are killed by the matrix") {
  Rng rng(9);
  Field f = Field::of_order(9);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix m = random_matrix(f, 4, 6, rng);
    Matrix k = null_space(m);
    CHECK(k.rows() == 6 - rank(m));
    Matrix prod = m * k.transpose();
    for (std::size_t i = 0; i < prod.rows(); ++i)
      for (std::size_t j = 0; j < prod.cols(); ++j) CHECK(prod.at(i, j) == 0);
    CHECK(rank(k) == k.rows());
  }
}

TEST_CASE("solve_unique solves and detects inconsistency") {
  Rng rng(13);
  Field f = Field::of_order(65536);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a = random_matrix(f, 6, 4, rng);
    if (rank(a) != 4) continue;
    Matrix x = random_matrix(f, 4, 3, rng);
    Matrix b = a * x;
    auto got = solve_unique(a, b);
    REQUIRE(got.has_value());
    CHECK(*got == x);
  }
}
