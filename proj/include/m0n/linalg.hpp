#pragma once

#include <map>
#include <string>
#include <vector>

#include "m0n/errors.hpp"
#include "m0n/rational.hpp"

namespace m0n {

/// Dense row-major matrix of exact rationals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}
  Matrix(std::initializer_list<std::initializer_list<Rational>> init) {
    rows_ = static_cast<int>(init.size());
    cols_ = rows_ ? static_cast<int>(init.begin()->size()) : 0;
    for (const auto& row : init) {
      if (static_cast<int>(row.size()) != cols_) throw input_error("ragged matrix literal");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Rational& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw input_error("matrix shapes do not match");
    Matrix out(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const Rational& x = a(i, k);
        if (x == 0) continue;
        for (int j = 0; j < b.cols_; ++j)
          if (b(k, j) != 0) out(i, j) += x * b(k, j);
      }
    return out;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw input_error("matrix shapes do not match");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw input_error("matrix shapes do not match");
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  std::vector<Rational> apply(const std::vector<Rational>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw input_error("vector length does not match matrix");
    std::vector<Rational> out(rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if ((*this)(i, j) != 0 && v[j] != 0) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_identity() const { return *this == identity(rows_) && rows_ == cols_; }
  bool is_symmetric() const { return rows_ == cols_ && *this == transpose(); }
  bool is_zero() const {
    for (const auto& x : data_)
      if (x != 0) return false;
    return true;
  }
  bool is_upper_unitriangular() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j <= i; ++j)
        if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
    return true;
  }
  int nonzero_count() const {
    int c = 0;
    for (const auto& x : data_) c += (x != 0);
    return c;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

/// Gauss-Jordan inverse; throws input_error when the matrix is singular.
inline Matrix inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw input_error("cannot invert a non-square matrix");
  const int n = m.rows();
  Matrix a = m;
  Matrix inv = Matrix::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (a(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw input_error("matrix is singular");
    if (pivot != col)
      for (int j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    const Rational p = a(col, col);
    for (int j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a(r, col) == 0) continue;
      const Rational f = a(r, col);
      for (int j = 0; j < n; ++j) {
        if (a(col, j) != 0) a(r, j) -= f * a(col, j);
        if (inv(col, j) != 0) inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

inline Rational determinant(Matrix a) {
  if (a.rows() != a.cols()) throw input_error("determinant of a non-square matrix");
  const int n = a.rows();
  Rational det = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (a(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) return 0;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (int r = col + 1; r < n; ++r) {
      if (a(r, col) == 0) continue;
      const Rational f = a(r, col) / a(col, col);
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

using SparseRow = std::map<int, Rational>;

/// Incremental row echelon form over Q for sparse rows. Pivot rows are kept
/// normalized (leading coefficient 1), keyed by their leading column.
class SparseEchelon {
 public:
  /// Reduces row against the current pivots; adds it when independent.
  /// Returns true when the rank grew.
  bool insert(SparseRow row) {
    reduce(row);
    if (row.empty()) return false;
    const int lead = row.begin()->first;
    const Rational inv = 1 / Rational(row.begin()->second);
    for (auto& [c, v] : row) v *= inv;
    pivots_.emplace(lead, std::move(row));
    return true;
  }

  /// Remainder of row modulo the span of the pivots (empty when in the span).
  void reduce(SparseRow& row) const {
    auto it = row.begin();
    while (it != row.end()) {
      auto p = pivots_.find(it->first);
      if (p == pivots_.end()) {
        ++it;
        continue;
      }
      const Rational f = it->second;
      const int col = it->first;
      for (const auto& [c, v] : p->second) {
        Rational& slot = row[c];
        slot -= f * v;
      }
      for (auto jt = row.begin(); jt != row.end();) {
        if (jt->second == 0)
          jt = row.erase(jt);
        else
          ++jt;
      }
      it = row.upper_bound(col);
    }
  }

  bool in_span(SparseRow row) const {
    reduce(row);
    return row.empty();
  }

  int rank() const { return static_cast<int>(pivots_.size()); }
  std::vector<int> pivot_columns() const {
    std::vector<int> out;
    for (const auto& [c, r] : pivots_) out.push_back(c);
    return out;
  }

 private:
  std::map<int, SparseRow> pivots_;
};

inline int sparse_rank(const std::vector<SparseRow>& rows) {
  SparseEchelon e;
  for (const auto& r : rows) e.insert(r);
  return e.rank();
}

}  // namespace m0n
