#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "skg/field.hpp"

namespace skg::gf {

/// Dense row-major matrix over GF(q). All arithmetic is exact; there are no
/// tolerances anywhere in this module.
class Matrix {
 public:
  Matrix(Field field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), v_(rows * cols, 0) {}

  static Matrix identity(Field field, std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Field& field() const { return field_; }

  std::uint16_t& at(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }
  std::uint16_t at(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }
  std::uint16_t* row(std::size_t r) { return v_.data() + r * cols_; }
  const std::uint16_t* row(std::size_t r) const { return v_.data() + r * cols_; }

  Matrix operator*(const Matrix& o) const;
  Matrix transpose() const;
  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && field_ == o.field_ && v_ == o.v_;
  }

  /// Vertical stack [a; b]; throws on column or field mismatch.
  static Matrix vstack(const Matrix& a, const Matrix& b);
  /// Copy of the listed columns, in the given order.
  Matrix select_columns(std::span<const std::uint32_t> idx) const;
  void swap_rows(std::size_t a, std::size_t b);

 private:
  Field field_;
  std::size_t rows_, cols_;
  std::vector<std::uint16_t> v_;
};

/// Row echelon form in place; returns the rank and, when requested, the
/// pivot column indices.
std::size_t row_echelon(Matrix& m, std::vector<std::size_t>* pivot_cols = nullptr);

/// Rank by exact elimination.
std::size_t rank(Matrix m);

/// Rank of the vertical stack [a; b].
std::size_t stack_rank(const Matrix& a, const Matrix& b);

/// Coefficients c with c * basis = target, when target lies in the row span
/// of basis; std::nullopt otherwise.
std::optional<std::vector<std::uint16_t>> solve_in_rowspan(
    const Matrix& basis, std::span<const std::uint16_t> target);

/// Completes a full-row-rank matrix to a square invertible one: returns the
/// rows (standard basis vectors on the non-pivot columns) whose stack with
/// the input has rank equal to the column count. Throws when the input is
/// row-rank deficient.
Matrix complete_basis(const Matrix& a_z);

/// Basis of the right null space, one kernel vector per row.
Matrix null_space(const Matrix& m);

/// Unique solution X of A X = B when A has full column rank; std::nullopt
/// when the system is rank-deficient or inconsistent.
std::optional<Matrix> solve_unique(const Matrix& a, const Matrix& b);

}  // namespace skg::gf
