#pragma once

#include <cstdint>

namespace intcpx {

using uint128 = unsigned __int128;

/// Largest n the exact cube-versus-power-of-3 comparisons accept (n^3 must
/// fit in 127 bits).
inline constexpr std::uint64_t kExactCubeLimit = std::uint64_t{1} << 42;

/// Smallest c with 3^c >= n^3, i.e. the exact integer ceiling of 3*log3(n).
/// Every ones-count of n is at least this. Requires 1 <= n <= kExactCubeLimit.
unsigned ceil_3log3(std::uint64_t n);

/// True once product^3 >= 3^ones: the rigorous stopping rule for the summand
/// scan of the complexity recurrence (product = a*(n-a), ones = current best).
bool sum_scan_done(uint128 product, unsigned ones);

}  // namespace intcpx
