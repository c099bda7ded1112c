#include "intcpx/pow3.hpp"

#include <array>
#include <stdexcept>

#include <gmp.h>

namespace intcpx {
namespace {

constexpr uint128 kU128Max = ~uint128{0};

// 3^c fits in 127 bits exactly for c <= 80; any cube of n <= kExactCubeLimit
// stays below 3^80, so ceil_3log3 never needs the saturated tail.
constexpr int kPow3Count = 81;

// Entry b holds the smallest t with t^3 >= 3^b.  Saturated to kU128Max once
// t itself would not fit; a real product never reaches the saturated value.
constexpr int kThresholdCount = 256;

struct Tables {
  std::array<uint128, kPow3Count> pow3{};
  std::array<uint128, kThresholdCount> cube_threshold{};

  Tables() {
    uint128 p = 1;
    for (int c = 0; c < kPow3Count; ++c) {
      pow3[c] = p;
      if (c + 1 < kPow3Count) p *= 3;
    }

    mpz_t power, root, cube;
    mpz_inits(power, root, cube, nullptr);
    for (int b = 0; b < kThresholdCount; ++b) {
      mpz_ui_pow_ui(power, 3, static_cast<unsigned long>(b));
      mpz_root(root, power, 3);
      mpz_pow_ui(cube, root, 3);
      if (mpz_cmp(cube, power) < 0) mpz_add_ui(root, root, 1);
      if (mpz_sizeinbase(root, 2) > 127) {
        cube_threshold[b] = kU128Max;
        continue;
      }
      uint128 t = 0;
      for (std::size_t limb = mpz_size(root); limb-- > 0;) {
        t = (t << 64) | mpz_getlimbn(root, static_cast<mp_size_t>(limb));
      }
      cube_threshold[b] = t;
    }
    mpz_clears(power, root, cube, nullptr);
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

unsigned ceil_3log3(std::uint64_t n) {
  if (n == 0 || n > kExactCubeLimit) {
    throw std::out_of_range("ceil_3log3: argument outside exact range");
  }
  const uint128 cube = uint128{n} * n * n;
  const auto& pow3 = tables().pow3;
  unsigned lo = 0, hi = kPow3Count - 1;
  while (lo < hi) {
    const unsigned mid = (lo + hi) / 2;
    if (pow3[mid] >= cube) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

bool sum_scan_done(uint128 product, unsigned ones) {
  if (ones >= kThresholdCount) return false;
  return product >= tables().cube_threshold[ones];
}

}  // namespace intcpx
