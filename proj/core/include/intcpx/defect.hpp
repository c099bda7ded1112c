#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include <gmpxx.h>
#include <json.hpp>

#include "intcpx/complexity.hpp"

namespace intcpx {

/// The real value C - 3*log3(n), stored as the pair (C, n) and compared
/// exactly in integer arithmetic; no floating point enters any decision.
///
/// Canonical form strips every factor of 3 out of n, adjusting C by 3 per
/// factor.  Two values are equal as reals iff their canonical pairs are
/// identical.  C may go negative in intermediate algebra.
class ExactDefect {
 public:
  /// Value 0, the defect of every power of 3.
  ExactDefect() : ones_(0), arg_(1) {}
  ExactDefect(long long ones, mpz_class arg);

  /// delta(n) = (||n||, n), canonicalized.
  static ExactDefect of_value(std::uint64_t n, const ComplexityTable& table);
  static ExactDefect of_value(std::uint64_t n, const ComplexityOracle& oracle);

  long long ones() const noexcept { return ones_; }
  const mpz_class& arg() const noexcept { return arg_; }

  /// Ordering of the real values, decided by comparing 3^(C1-C2)*n2^3
  /// against n1^3 in big integers.
  std::strong_ordering compare(const ExactDefect& other) const;

  friend bool operator==(const ExactDefect& a, const ExactDefect& b) {
    return a.ones_ == b.ones_ && a.arg_ == b.arg_;
  }
  friend std::strong_ordering operator<=>(const ExactDefect& a,
                                          const ExactDefect& b) {
    return a.compare(b);
  }

  /// Exact truth of C - 3*log3(n) < k, via 3^(C-k) < n^3.
  bool less_than_int(long long k) const;

  /// When the two values differ by a rational (equivalently, an integer),
  /// i.e. the canonical args coincide, returns that integer difference.
  std::optional<long long> integer_difference(const ExactDefect& other) const;

  /// C mod 3 of the canonical form, in [0, 3).
  int congruence_class() const noexcept {
    return static_cast<int>(((ones_ % 3) + 3) % 3);
  }

  /// True iff the value is an integer (canonical arg is 1).
  bool is_integer() const noexcept { return arg_ == 1; }

  /// Display-only decimal approximation (12 significant digits).
  double approx() const;
  std::string approx_string() const;

  /// {"C": int, "n": "decimal-string", "approx": "float-string"}
  nlohmann::json to_json() const;

 private:
  long long ones_;
  mpz_class arg_;
};

/// delta(n): requires n <= table.limit.
inline ExactDefect defect_of(std::uint64_t n, const ComplexityTable& table) {
  return ExactDefect::of_value(n, table);
}

}  // namespace intcpx
