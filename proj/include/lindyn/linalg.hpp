#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "lindyn/errors.hpp"
#include "lindyn/matrix.hpp"
#include "lindyn/sparse.hpp"

namespace lindyn {

// Exact linear-independence test: Gaussian elimination on the matrix whose
// rows are the given elements over the union of their supports.
template <typename Tag>
bool linearly_independent(const std::vector<SparseMap<Tag>>& items) {
  if (items.empty()) throw InvalidInput("linearly_independent: empty list");
  std::map<std::size_t, std::size_t> column_of;
  for (const auto& v : items) {
    for (const auto& [i, c] : v.entries()) column_of.emplace(i, 0);
  }
  std::size_t next = 0;
  for (auto& [i, col] : column_of) col = next++;
  if (column_of.size() < items.size()) return false;
  RationalMatrix a(items.size(), column_of.size());
  for (std::size_t r = 0; r < items.size(); ++r) {
    for (const auto& [i, c] : items[r].entries()) a.at(r, column_of[i]) = c;
  }
  return a.rank() == items.size();
}

}  // namespace lindyn
