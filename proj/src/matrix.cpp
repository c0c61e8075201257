#include "msn/matrix.hpp"

#include "msn/error.hpp"

namespace msn {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw Error(ErrorKind::DimensionMismatch, "from_rows: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vec>& columns, std::size_t rows) {
  Matrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw Error(ErrorKind::DimensionMismatch, "from_columns: ragged columns");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

Vec Matrix::row(std::size_t r) const {
  return Vec(data_.begin() + static_cast<long>(r * cols_), data_.begin() + static_cast<long>((r + 1) * cols_));
}

Vec Matrix::column(std::size_t c) const {
  Vec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

std::vector<Vec> Matrix::row_list() const {
  std::vector<Vec> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
  return out;
}

std::vector<Vec> Matrix::column_list() const {
  std::vector<Vec> out;
  out.reserve(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out.push_back(column(c));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Vec Matrix::apply(const Vec& x) const {
  if (x.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "apply: vector has wrong size");
  Vec y(rows_, Rational(0));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (sgn(x[c]) != 0 && sgn((*this)(r, c)) != 0) y[r] += (*this)(r, c) * x[c];
  return y;
}

Vec Matrix::apply_transpose(const Vec& y) const {
  if (y.size() != rows_) throw Error(ErrorKind::DimensionMismatch, "apply_transpose: vector has wrong size");
  Vec x(cols_, Rational(0));
  for (std::size_t r = 0; r < rows_; ++r) {
    if (sgn(y[r]) == 0) continue;
    for (std::size_t c = 0; c < cols_; ++c)
      if (sgn((*this)(r, c)) != 0) x[c] += (*this)(r, c) * y[r];
  }
  return x;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorKind::DimensionMismatch, "matrix product: inner dimensions differ");
  Matrix p(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (sgn(b(k, j)) != 0) p(i, j) += aik * b(k, j);
    }
  return p;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::ShapeMismatch, "matrix sum: shapes differ");
  Matrix s(a.rows_, a.cols_);
  for (std::size_t i = 0; i < a.data_.size(); ++i) s.data_[i] = a.data_[i] + b.data_[i];
  return s;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw Error(ErrorKind::ShapeMismatch, "matrix difference: shapes differ");
  Matrix s(a.rows_, a.cols_);
  for (std::size_t i = 0; i < a.data_.size(); ++i) s.data_[i] = a.data_[i] - b.data_[i];
  return s;
}

Matrix operator*(const Rational& s, const Matrix& a) {
  Matrix r = a;
  for (auto& q : r.data_) q *= s;
  return r;
}

RowEchelon rref(Matrix m) {
  RowEchelon out;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < m.cols() && lead < m.rows(); ++c) {
    std::size_t p = lead;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != lead)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(lead, j));
    Rational inv = 1 / m(lead, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(lead, j) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == lead || sgn(m(r, c)) == 0) continue;
      Rational f = m(r, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (sgn(m(lead, j)) != 0) m(r, j) -= f * m(lead, j);
    }
    out.pivots.push_back(c);
    ++lead;
  }
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

std::vector<Vec> kernel_basis(const Matrix& m) {
  RowEchelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec v = zeros(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Vec> image_basis(const Matrix& m) {
  std::vector<Vec> basis;
  for (auto c : rref(m).pivots) basis.push_back(m.column(c));
  return basis;
}

std::vector<Vec> row_space_basis(const Matrix& m) {
  RowEchelon e = rref(m);
  std::vector<Vec> basis;
  for (std::size_t r = 0; r < e.pivots.size(); ++r) basis.push_back(e.reduced.row(r));
  return basis;
}

std::vector<std::size_t> independent_columns(const Matrix& m) { return rref(m).pivots; }

std::vector<Vec> intersect_spans(const std::vector<Vec>& a, const std::vector<Vec>& b, std::size_t ambient) {
  if (a.empty() || b.empty()) return {};
  // x = A s = B t  <=>  [A | -B] (s, t) = 0
  Matrix joint(ambient, a.size() + b.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j].size() != ambient) throw Error(ErrorKind::DimensionMismatch, "intersect_spans: wrong ambient size");
    for (std::size_t r = 0; r < ambient; ++r) joint(r, j) = a[j][r];
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (b[j].size() != ambient) throw Error(ErrorKind::DimensionMismatch, "intersect_spans: wrong ambient size");
    for (std::size_t r = 0; r < ambient; ++r) joint(r, a.size() + j) = -b[j][r];
  }
  std::vector<Vec> gens;
  for (const auto& k : kernel_basis(joint)) {
    Vec x = zeros(ambient);
    for (std::size_t j = 0; j < a.size(); ++j)
      if (sgn(k[j]) != 0)
        for (std::size_t r = 0; r < ambient; ++r) x[r] += k[j] * a[j][r];
    gens.push_back(std::move(x));
  }
  if (gens.empty()) return {};
  return row_space_basis(Matrix::from_rows(gens, ambient));
}

std::vector<Vec> annihilator(const std::vector<Vec>& vs, std::size_t ambient) {
  if (vs.empty()) {
    std::vector<Vec> all;
    for (std::size_t i = 0; i < ambient; ++i) all.push_back(unit_vector(ambient, i));
    return all;
  }
  return kernel_basis(Matrix::from_rows(vs, ambient));
}

Rational determinant(Matrix m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  Rational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m(p, c)) == 0) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (sgn(m(r, c)) == 0) continue;
      Rational f = m(r, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

Matrix inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "inverse of non-square matrix");
  const std::size_t n = m.rows();
  RowEchelon e = rref(hstack(m, Matrix::identity(n)));
  if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] >= n))
    throw Error(ErrorKind::DimensionMismatch, "inverse of singular matrix");
  Matrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = e.reduced(r, n + c);
  return inv;
}

bool solve(const Matrix& m, const Vec& b, Vec& x) {
  if (b.size() != m.rows()) throw Error(ErrorKind::DimensionMismatch, "solve: right-hand side has wrong size");
  Matrix aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = b[r];
  }
  RowEchelon e = rref(std::move(aug));
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return false;
  x = zeros(m.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, m.cols());
  return true;
}

Matrix stack_rows(const Matrix& top, const Matrix& bottom) {
  if (top.cols() != bottom.cols()) throw Error(ErrorKind::ShapeMismatch, "stack_rows: column counts differ");
  Matrix m(top.rows() + bottom.rows(), top.cols());
  for (std::size_t r = 0; r < top.rows(); ++r)
    for (std::size_t c = 0; c < top.cols(); ++c) m(r, c) = top(r, c);
  for (std::size_t r = 0; r < bottom.rows(); ++r)
    for (std::size_t c = 0; c < top.cols(); ++c) m(top.rows() + r, c) = bottom(r, c);
  return m;
}

Matrix hstack(const Matrix& left, const Matrix& right) {
  if (left.rows() != right.rows()) throw Error(ErrorKind::ShapeMismatch, "hstack: row counts differ");
  Matrix m(left.rows(), left.cols() + right.cols());
  for (std::size_t r = 0; r < left.rows(); ++r) {
    for (std::size_t c = 0; c < left.cols(); ++c) m(r, c) = left(r, c);
    for (std::size_t c = 0; c < right.cols(); ++c) m(r, left.cols() + c) = right(r, c);
  }
  return m;
}

Matrix block_inclusion(std::size_t total, std::size_t offset, std::size_t dim) {
  if (offset + dim > total) throw Error(ErrorKind::DimensionMismatch, "block_inclusion: block exceeds total");
  Matrix m(total, dim);
  for (std::size_t i = 0; i < dim; ++i) m(offset + i, i) = 1;
  return m;
}

}  // namespace msn
