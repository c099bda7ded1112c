#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "intcpx/complexity.hpp"

namespace testsupport {

/// Independent ones-count oracle: breadth-first over the sets E_j of values
/// expressible with exactly j ones, E_j = union over i of sums and products
/// of E_i x E_{j-i}.  Subexpression values never exceed the root value, so
/// capping at max_n loses nothing.  Shares no code with the table builder.
inline std::vector<unsigned> bfs_ones_oracle(std::uint64_t max_n) {
  std::vector<std::vector<std::uint64_t>> by_ones(2);
  by_ones[1] = {1};
  std::vector<unsigned> best(max_n + 1, 0);
  best[1] = 1;
  std::uint64_t found = 1;

  for (unsigned j = 2; found < max_n; ++j) {
    if (j > 200) throw std::logic_error("bfs oracle runaway");
    std::set<std::uint64_t> values;
    for (unsigned i = 1; i < j; ++i) {
      for (std::uint64_t a : by_ones[i]) {
        for (std::uint64_t b : by_ones[j - i]) {
          if (a + b <= max_n) values.insert(a + b);
          if (a <= max_n / b) values.insert(a * b);
        }
      }
    }
    by_ones.emplace_back(values.begin(), values.end());
    for (std::uint64_t v : by_ones[j]) {
      if (best[v] == 0) {
        best[v] = j;
        ++found;
      }
    }
  }
  return best;
}

/// Shared table for the test binaries; built once.
inline const intcpx::ComplexityTable& test_table() {
  static const intcpx::ComplexityTable table =
      intcpx::ComplexityTable::build(250000);
  return table;
}

inline const intcpx::ComplexityOracle& test_oracle() {
  static const intcpx::ComplexityOracle oracle(test_table());
  return oracle;
}

}  // namespace testsupport
