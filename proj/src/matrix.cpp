#include "skg/matrix.hpp"

#include <stdexcept>

namespace skg::gf {

Matrix Matrix::identity(Field field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_ || field_ != o.field_)
    throw std::invalid_argument("matrix product dimension mismatch");
  Matrix r(field_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint16_t* dst = r.row(i);
    for (std::size_t k = 0; k < cols_; ++k) {
      const std::uint16_t f = at(i, k);
      if (f) field_.row_addmul(dst, o.row(k), o.cols_, f);
    }
  }
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

Matrix Matrix::vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols() || a.field() != b.field())
    throw std::invalid_argument("vstack dimension or field mismatch");
  Matrix r(a.field(), a.rows() + b.rows(), a.cols());
  std::copy(a.v_.begin(), a.v_.end(), r.v_.begin());
  std::copy(b.v_.begin(), b.v_.end(), r.v_.begin() + a.v_.size());
  return r;
}

Matrix Matrix::select_columns(std::span<const std::uint32_t> idx) const {
  Matrix r(field_, rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    const std::uint16_t* src = row(i);
    std::uint16_t* dst = r.row(i);
    for (std::size_t j = 0; j < idx.size(); ++j) dst[j] = src[idx[j]];
  }
  return r;
}

void Matrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  std::swap_ranges(v_.begin() + a * cols_, v_.begin() + (a + 1) * cols_,
                   v_.begin() + b * cols_);
}

std::size_t row_echelon(Matrix& m, std::vector<std::size_t>* pivot_cols) {
  const Field& f = m.field();
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pr = r;
    while (pr < rows && m.at(pr, c) == 0) ++pr;
    if (pr == rows) continue;
    m.swap_rows(pr, r);
    const std::uint32_t piv = m.at(r, c);
    if (piv != 1) f.row_scale(m.row(r) + c, cols - c, f.inv(piv));
    for (std::size_t i = r + 1; i < rows; ++i) {
      const std::uint16_t x = m.at(i, c);
      if (x) f.row_submul(m.row(i) + c, m.row(r) + c, cols - c, x);
    }
    if (pivot_cols) pivot_cols->push_back(c);
    ++r;
  }
  return r;
}

std::size_t rank(Matrix m) { return row_echelon(m); }

std::size_t stack_rank(const Matrix& a, const Matrix& b) {
  Matrix s = Matrix::vstack(a, b);
  return row_echelon(s);
}

namespace {

// Any solution x of A x = b, or nullopt when inconsistent. A may be rank
// deficient; free variables are set to zero.
std::optional<std::vector<std::uint16_t>> solve_any(const Matrix& a,
                                                    std::span<const std::uint16_t> b) {
  const Field& f = a.field();
  const std::size_t n = a.cols();
  Matrix aug(f, a.rows(), n + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::copy(a.row(i), a.row(i) + n, aug.row(i));
    aug.at(i, n) = b[i];
  }
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < aug.rows(); ++c) {
    std::size_t pr = r;
    while (pr < aug.rows() && aug.at(pr, c) == 0) ++pr;
    if (pr == aug.rows()) continue;
    aug.swap_rows(pr, r);
    const std::uint32_t piv = aug.at(r, c);
    if (piv != 1) f.row_scale(aug.row(r) + c, n + 1 - c, f.inv(piv));
    for (std::size_t i = r + 1; i < aug.rows(); ++i) {
      const std::uint16_t x = aug.at(i, c);
      if (x) f.row_submul(aug.row(i) + c, aug.row(r) + c, n + 1 - c, x);
    }
    pivots.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < aug.rows(); ++i)
    if (aug.at(i, n) != 0) return std::nullopt;
  std::vector<std::uint16_t> x(n, 0);
  for (std::size_t i = r; i-- > 0;) {
    const std::size_t c = pivots[i];
    std::uint32_t acc = aug.at(i, n);
    for (std::size_t k = c + 1; k < n; ++k)
      acc = f.sub(acc, f.mul(aug.at(i, k), x[k]));
    x[c] = std::uint16_t(acc);
  }
  return x;
}

}  // namespace

std::optional<std::vector<std::uint16_t>> solve_in_rowspan(
    const Matrix& basis, std::span<const std::uint16_t> target) {
  if (target.size() != basis.cols())
    throw std::invalid_argument("solve_in_rowspan dimension mismatch");
  // c * basis = target  <=>  basis^T c^T = target^T
  return solve_any(basis.transpose(), target);
}

Matrix complete_basis(const Matrix& a_z) {
  if (a_z.rows() > a_z.cols())
    throw std::invalid_argument("complete_basis: more rows than columns");
  Matrix work = a_z;
  std::vector<std::size_t> pivots;
  const std::size_t rk = row_echelon(work, &pivots);
  if (rk != a_z.rows())
    throw std::invalid_argument("complete_basis: input is not full row rank");
  std::vector<bool> is_pivot(a_z.cols(), false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  Matrix out(a_z.field(), a_z.cols() - a_z.rows(), a_z.cols());
  std::size_t r = 0;
  for (std::size_t c = 0; c < a_z.cols(); ++c)
    if (!is_pivot[c]) out.at(r++, c) = 1;
  return out;
}

Matrix null_space(const Matrix& m) {
  const Field& f = m.field();
  Matrix work = m;
  std::vector<std::size_t> pivots;
  const std::size_t rk = row_echelon(work, &pivots);
  // back-substitute to reduced form
  for (std::size_t i = rk; i-- > 0;) {
    const std::size_t c = pivots[i];
    for (std::size_t j = 0; j < i; ++j) {
      const std::uint16_t x = work.at(j, c);
      if (x) f.row_submul(work.row(j) + c, work.row(i) + c, m.cols() - c, x);
    }
  }
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  Matrix basis(f, m.cols() - rk, m.cols());
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (is_pivot[c]) continue;
    basis.at(r, c) = 1;
    for (std::size_t i = 0; i < rk; ++i) {
      const std::uint16_t x = work.at(i, c);
      if (x) basis.at(r, pivots[i]) = std::uint16_t(f.neg(x));
    }
    ++r;
  }
  return basis;
}

std::optional<Matrix> solve_unique(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.field() != b.field())
    throw std::invalid_argument("solve_unique dimension mismatch");
  const Field& f = a.field();
  const std::size_t n = a.cols(), L = b.cols();
  Matrix aug(f, a.rows(), n + L);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::copy(a.row(i), a.row(i) + n, aug.row(i));
    std::copy(b.row(i), b.row(i) + L, aug.row(i) + n);
  }
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < aug.rows(); ++c) {
    std::size_t pr = r;
    while (pr < aug.rows() && aug.at(pr, c) == 0) ++pr;
    if (pr == aug.rows()) continue;
    aug.swap_rows(pr, r);
    const std::uint32_t piv = aug.at(r, c);
    if (piv != 1) f.row_scale(aug.row(r) + c, n + L - c, f.inv(piv));
    for (std::size_t i = r + 1; i < aug.rows(); ++i) {
      const std::uint16_t x = aug.at(i, c);
      if (x) f.row_submul(aug.row(i) + c, aug.row(r) + c, n + L - c, x);
    }
    pivots.push_back(c);
    ++r;
  }
  if (r < n) return std::nullopt;  // column-rank deficient
  // rows below r must have zero right-hand side for consistency
  for (std::size_t i = r; i < aug.rows(); ++i)
    for (std::size_t j = 0; j < L; ++j)
      if (aug.at(i, n + j) != 0) return std::nullopt;
  Matrix x(f, n, L);
  for (std::size_t i = n; i-- > 0;) {
    // pivots[i] == i because r == n
    for (std::size_t j = 0; j < L; ++j) {
      std::uint32_t acc = aug.at(i, n + j);
      for (std::size_t k = i + 1; k < n; ++k)
        acc = f.sub(acc, f.mul(aug.at(i, k), x.at(k, j)));
      x.at(i, j) = std::uint16_t(acc);
    }
  }
  return x;
}

}  // namespace skg::gf
