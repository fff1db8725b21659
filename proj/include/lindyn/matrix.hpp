#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lindyn/rational.hpp"

namespace lindyn {

// Small dense exact matrix. Sizes stay tiny here (rank tests on short lists,
// k x k solves with k <= 4), so plain rational Gaussian elimination is both
// exact and cheap.
class RationalMatrix {
 public:
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  RationalMatrix operator*(const RationalMatrix& o) const;

  std::size_t rank() const;
  Rational determinant() const;  // square only
  std::optional<RationalMatrix> inverse() const;  // nullopt when singular

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Rational> a_;
};

}  // namespace lindyn
