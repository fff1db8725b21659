#include "lindyn/matrix.hpp"

#include "lindyn/errors.hpp"

namespace lindyn {

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Rational(1);
  return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
  if (cols_ != o.rows_) throw InvalidInput("RationalMatrix: shape mismatch in product");
  RationalMatrix out(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& aik = at(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) out.at(i, j) += aik * o.at(k, j);
    }
  }
  return out;
}

std::size_t RationalMatrix::rank() const {
  RationalMatrix w = *this;
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols_ && r < rows_; ++col) {
    std::size_t pivot = r;
    while (pivot < rows_ && w.at(pivot, col).is_zero()) ++pivot;
    if (pivot == rows_) continue;
    if (pivot != r) {
      for (std::size_t j = 0; j < cols_; ++j) std::swap(w.at(pivot, j), w.at(r, j));
    }
    const Rational inv = w.at(r, col).inverse();
    for (std::size_t i = r + 1; i < rows_; ++i) {
      if (w.at(i, col).is_zero()) continue;
      const Rational factor = w.at(i, col) * inv;
      for (std::size_t j = col; j < cols_; ++j) w.at(i, j) -= factor * w.at(r, j);
    }
    ++r;
  }
  return r;
}

Rational RationalMatrix::determinant() const {
  if (rows_ != cols_) throw InvalidInput("RationalMatrix: determinant of non-square matrix");
  RationalMatrix w = *this;
  Rational det(1);
  for (std::size_t col = 0; col < cols_; ++col) {
    std::size_t pivot = col;
    while (pivot < rows_ && w.at(pivot, col).is_zero()) ++pivot;
    if (pivot == rows_) return Rational(0);
    if (pivot != col) {
      for (std::size_t j = 0; j < cols_; ++j) std::swap(w.at(pivot, j), w.at(col, j));
      det = -det;
    }
    det *= w.at(col, col);
    const Rational inv = w.at(col, col).inverse();
    for (std::size_t i = col + 1; i < rows_; ++i) {
      if (w.at(i, col).is_zero()) continue;
      const Rational factor = w.at(i, col) * inv;
      for (std::size_t j = col; j < cols_; ++j) w.at(i, j) -= factor * w.at(col, j);
    }
  }
  return det;
}

std::optional<RationalMatrix> RationalMatrix::inverse() const {
  if (rows_ != cols_) throw InvalidInput("RationalMatrix: inverse of non-square matrix");
  const std::size_t n = rows_;
  RationalMatrix w = *this;
  RationalMatrix inv = identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && w.at(pivot, col).is_zero()) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(w.at(pivot, j), w.at(col, j));
        std::swap(inv.at(pivot, j), inv.at(col, j));
      }
    }
    const Rational scale = w.at(col, col).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      w.at(col, j) *= scale;
      inv.at(col, j) *= scale;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || w.at(i, col).is_zero()) continue;
      const Rational factor = w.at(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        w.at(i, j) -= factor * w.at(col, j);
        inv.at(i, j) -= factor * inv.at(col, j);
      }
    }
  }
  return inv;
}

}  // namespace lindyn
