#pragma once

// The octagon frieze with an entry 11, transcribed row by row. Odd rows sit
// half a step to the right of even rows, so the first printed entry of each
// odd row (the one left of the first even-row entry) is dropped.

#include <optional>
#include <vector>

#include "ptolemy/frieze.hpp"

namespace ptolemy::testing {

inline FriezeGrid octagon_frieze_grid() {
  const std::vector<std::vector<int>> rows{
      {1, 1, 1, 1, 1, 1, 1, 1, 1},
      {1, 3, 4, 1, 2, 2, 3, 2, 1},
      {1, 2, 11, 3, 1, 3, 5, 5, 1},
      {1, 7, 8, 2, 1, 7, 8, 2, 1},
      {1, 3, 5, 5, 1, 2, 11, 3, 1},
      {2, 2, 3, 2, 1, 3, 4, 1, 2},
      {1, 1, 1, 1, 1, 1, 1, 1, 1},
  };
  FriezeGrid g;
  for (const auto& row : rows) {
    g.rows.emplace_back();
    for (int v : row) g.rows.back().emplace_back(v);
  }
  return g;
}

/// One period of the second row, starting from its first printed entry.
inline std::vector<int> octagon_quiddity() { return {2, 1, 3, 4, 1, 2, 2, 3}; }

/// Smallest s such that columns s.. of `wide` reproduce `fixture`, if any.
inline std::optional<std::size_t> matching_shift(const FriezeGrid& fixture, const FriezeGrid& wide, std::size_t max_shift) {
  if (fixture.rows.size() != wide.rows.size()) return std::nullopt;
  for (std::size_t s = 0; s <= max_shift; ++s) {
    bool ok = true;
    for (std::size_t r = 0; r < fixture.rows.size() && ok; ++r)
      for (std::size_t k = 0; k < fixture.rows[r].size() && ok; ++k)
        ok = s + k < wide.rows[r].size() && wide.rows[r][s + k] == fixture.rows[r][k];
    if (ok) return s;
  }
  return std::nullopt;
}

}  // namespace ptolemy::testing
