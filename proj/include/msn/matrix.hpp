#pragma once

#include "msn/rational.hpp"

#include <cstddef>
#include <vector>

namespace msn {

// Dense exact matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vec>& rows, std::size_t cols);
  static Matrix from_columns(const std::vector<Vec>& columns, std::size_t rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vec row(std::size_t r) const;
  Vec column(std::size_t c) const;
  std::vector<Vec> row_list() const;
  std::vector<Vec> column_list() const;

  Matrix transpose() const;
  Vec apply(const Vec& x) const;
  Vec apply_transpose(const Vec& y) const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Rational& s, const Matrix& a);
  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

struct RowEchelon {
  Matrix reduced;                   // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

RowEchelon rref(Matrix m);
std::size_t rank(const Matrix& m);

// Null space basis in RREF-derived canonical form (one vector per free column).
std::vector<Vec> kernel_basis(const Matrix& m);
// Basis of the column space, taken from the pivot columns of m.
std::vector<Vec> image_basis(const Matrix& m);
// Basis of the row space (nonzero rows of the RREF).
std::vector<Vec> row_space_basis(const Matrix& m);

// Indices of a lexicographically first set of linearly independent columns.
std::vector<std::size_t> independent_columns(const Matrix& m);

// Basis of span(a) ∩ span(b) for families of vectors in the same ambient space.
std::vector<Vec> intersect_spans(const std::vector<Vec>& a, const std::vector<Vec>& b, std::size_t ambient);
// Basis of the annihilator {x : <v, x> = 0 for all v in vs}.
std::vector<Vec> annihilator(const std::vector<Vec>& vs, std::size_t ambient);

Rational determinant(Matrix m);
// Throws DimensionMismatch for non-square or singular input.
Matrix inverse(const Matrix& m);
// Some solution x of m x = b, or empty optional when inconsistent.
bool solve(const Matrix& m, const Vec& b, Vec& x);

// Block diagonal and block helpers used by the amalgamation constructions.
Matrix stack_rows(const Matrix& top, const Matrix& bottom);
Matrix hstack(const Matrix& left, const Matrix& right);
Matrix block_inclusion(std::size_t total, std::size_t offset, std::size_t dim);

}  // namespace msn
