#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lindyn/rational.hpp"

namespace lindyn {

// Finite-support map from coordinate index to exact rational coefficient.
// Canonical form: zero coefficients are never stored, so equality is plain
// entrywise equality. Values are immutable once built; every operation
// returns a new value and is safe to evaluate concurrently.
template <typename Tag>
class SparseMap {
 public:
  using Entries = std::map<std::size_t, Rational>;

  SparseMap() = default;

  // Basis element e_i (coefficient 1 at index i).
  static SparseMap unit(std::size_t index) {
    SparseMap out;
    out.entries_.emplace(index, Rational(1));
    return out;
  }

  // Sums duplicate indices, drops zeros.
  static SparseMap from_entries(const std::vector<std::pair<std::size_t, Rational>>& items) {
    SparseMap out;
    for (const auto& [i, c] : items) out.add_to(i, c);
    return out;
  }

  const Entries& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }

  Rational coeff(std::size_t i) const {
    auto it = entries_.find(i);
    return it == entries_.end() ? Rational() : it->second;
  }

  std::optional<std::size_t> max_index() const {
    if (entries_.empty()) return std::nullopt;
    return entries_.rbegin()->first;
  }

  std::optional<std::size_t> min_index() const {
    if (entries_.empty()) return std::nullopt;
    return entries_.begin()->first;
  }

  SparseMap operator+(const SparseMap& o) const {
    SparseMap out = *this;
    for (const auto& [i, c] : o.entries_) out.add_to(i, c);
    return out;
  }

  SparseMap operator-(const SparseMap& o) const {
    SparseMap out = *this;
    for (const auto& [i, c] : o.entries_) out.add_to(i, -c);
    return out;
  }

  SparseMap operator-() const { return scaled(Rational(-1)); }

  SparseMap scaled(const Rational& c) const {
    SparseMap out;
    if (c.is_zero()) return out;
    for (const auto& [i, v] : entries_) out.entries_.emplace(i, c * v);
    return out;
  }

  // Index shift upward: realizes one application of the forward shift.
  SparseMap shifted_up(std::size_t n) const {
    SparseMap out;
    for (const auto& [i, v] : entries_) out.entries_.emplace(i + n, v);
    return out;
  }

  // Index shift downward; entries below n vanish (backward shift kernel).
  SparseMap shifted_down(std::size_t n) const {
    SparseMap out;
    for (const auto& [i, v] : entries_) {
      if (i >= n) out.entries_.emplace(i - n, v);
    }
    return out;
  }

  // In-place accumulate c * o; returns *this. Internal building block for
  // the operator evaluators.
  SparseMap& add_scaled(const SparseMap& o, const Rational& c) {
    if (c.is_zero()) return *this;
    for (const auto& [i, v] : o.entries_) add_to(i, c * v);
    return *this;
  }

  friend bool operator==(const SparseMap&, const SparseMap&) = default;

 private:
  Entries entries_;

  void add_to(std::size_t i, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = entries_.try_emplace(i, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) entries_.erase(it);
    }
  }
};

struct VectorTag {};
struct FunctionalTag {};

using SparseVector = SparseMap<VectorTag>;
using SparseFunctional = SparseMap<FunctionalTag>;

// Evaluation <f, x> = sum_i f_i x_i over the common support.
inline Rational pair(const SparseFunctional& f, const SparseVector& x) {
  Rational total;
  const auto& a = f.entries();
  const auto& b = x.entries();
  if (a.size() <= b.size()) {
    for (const auto& [i, c] : a) {
      auto it = b.find(i);
      if (it != b.end()) total += c * it->second;
    }
  } else {
    for (const auto& [i, c] : b) {
      auto it = a.find(i);
      if (it != a.end()) total += c * it->second;
    }
  }
  return total;
}

// Squared l2 norm; distances are compared as squares against eps^2 so no
// square root is ever taken.
template <typename Tag>
Rational norm_sq(const SparseMap<Tag>& x) {
  Rational total;
  for (const auto& [i, c] : x.entries()) total += c.squared();
  return total;
}

inline SparseFunctional as_functional(const SparseVector& x) {
  std::vector<std::pair<std::size_t, Rational>> items(x.entries().begin(), x.entries().end());
  return SparseFunctional::from_entries(items);
}

inline SparseVector as_vector(const SparseFunctional& f) {
  std::vector<std::pair<std::size_t, Rational>> items(f.entries().begin(), f.entries().end());
  return SparseVector::from_entries(items);
}

}  // namespace lindyn
