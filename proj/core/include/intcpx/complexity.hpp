#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "intcpx/errors.hpp"
#include "intcpx/pow3.hpp"

namespace intcpx {

/// Dense table of exact ones-counts ||n|| for 1 <= n <= limit.
///
/// Built by the dynamic program over the recurrence
///   ||n|| = min over a+b=n or ab=n of ||a||+||b||,
/// with the summand scan stopped by the rigorous lower-bound cutoff
/// (a*(n-a))^3 >= 3^best.  Entries are written in ascending n and are final
/// when written; after build the table is immutable and freely shareable
/// between threads.
class ComplexityTable {
 public:
  /// Default cap on the number of entries (equals bytes of storage).
  static constexpr std::uint64_t kDefaultEntryCap = std::uint64_t{1} << 31;

  static ComplexityTable build(std::uint64_t limit,
                               std::uint64_t entry_cap = kDefaultEntryCap);

  /// Binary cache: magic "ICPX", version byte 1, little-endian u64 limit,
  /// then limit bytes values[1..limit].
  static ComplexityTable load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::uint64_t limit() const noexcept { return limit_; }

  /// ||n||; throws std::out_of_range outside [1, limit].
  unsigned operator[](std::uint64_t n) const {
    if (n == 0 || n > limit_) {
      throw std::out_of_range("complexity table: n outside [1, limit]");
    }
    return values_[n];
  }

  /// Raw entries, indexed by n (index 0 unused).
  const std::vector<std::uint8_t>& values() const noexcept { return values_; }

 private:
  ComplexityTable(std::uint64_t limit, std::vector<std::uint8_t> values)
      : limit_(limit), values_(std::move(values)) {}

  std::uint64_t limit_ = 0;
  std::vector<std::uint8_t> values_;
};

/// Horner evaluation of the binary expansion: a cheap constructive upper
/// bound on ||n||, at most (3/log 2)*log n for n > 1.
unsigned binary_upper_bound(std::uint64_t n);

/// Exact ||n|| for single values, reading the table when n is in range and
/// otherwise running a memoized branch-and-bound over the same recurrence
/// with the rigorous summand cutoff.  Query-only and concurrently callable.
class ComplexityOracle {
 public:
  /// Values above this would overflow the exact cube comparisons.
  static constexpr std::uint64_t kValueCap = kExactCubeLimit;

  explicit ComplexityOracle(const ComplexityTable& table) : table_(table) {}

  /// Exact ||n||.
  unsigned operator()(std::uint64_t n) const;

  /// Exact ||n|| when ||n|| <= budget, otherwise budget+1.  A tight budget
  /// (for instance ||n/3||+3 while scanning the 3^k ladder) makes the search
  /// far cheaper than a cold call.
  unsigned bounded(std::uint64_t n, unsigned budget) const;

  const ComplexityTable& table() const noexcept { return table_; }

 private:
  unsigned bounded_impl(std::uint64_t n, unsigned budget) const;
  unsigned greedy_upper_bound(std::uint64_t n) const;

  const ComplexityTable& table_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::uint64_t, unsigned> exact_;
  mutable std::unordered_map<std::uint64_t, unsigned> lower_;
};

}  // namespace intcpx
