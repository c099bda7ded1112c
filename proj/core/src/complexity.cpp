#include "intcpx/complexity.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <string>

namespace intcpx {
namespace {

constexpr char kMagic[4] = {'I', 'C', 'P', 'X'};
constexpr std::uint8_t kFormatVersion = 1;
constexpr unsigned kUnset = 255;

std::vector<std::uint32_t> sieve_primes(std::uint32_t bound) {
  std::vector<bool> composite(bound + 1, false);
  std::vector<std::uint32_t> primes;
  for (std::uint32_t p = 2; p <= bound; ++p) {
    if (composite[p]) continue;
    primes.push_back(p);
    for (std::uint64_t m = std::uint64_t{p} * p; m <= bound; m += p) {
      composite[m] = true;
    }
  }
  return primes;
}

struct Factorization {
  std::array<std::uint64_t, 16> prime{};
  std::array<int, 16> exponent{};
  int count = 0;
};

// Trial division over the prime list; the unfactored remainder, if any, is a
// prime above sqrt(n).
Factorization factorize(std::uint64_t n,
                        const std::vector<std::uint32_t>& primes) {
  Factorization f;
  std::uint64_t m = n;
  for (std::uint32_t p : primes) {
    if (std::uint64_t{p} * p > m) break;
    if (m % p != 0) continue;
    f.prime[f.count] = p;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    f.exponent[f.count++] = e;
  }
  if (m > 1) {
    f.prime[f.count] = m;
    f.exponent[f.count++] = 1;
  }
  return f;
}

// Appends every divisor d of n with 2 <= d and d*d <= n.  Partial products
// above sqrt(n) cannot shrink, so they are pruned immediately.
void divisors_up_to_sqrt(std::uint64_t n, const Factorization& f,
                         std::vector<std::uint64_t>& out) {
  out.clear();
  struct Frame {
    int index;
    std::uint64_t product;
  };
  std::vector<Frame> stack{{0, 1}};
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    if (i == f.count) {
      if (d >= 2) out.push_back(d);
      continue;
    }
    std::uint64_t q = 1;
    for (int e = 0; e <= f.exponent[i]; ++e) {
      const std::uint64_t next = d * q;
      if (next <= n / next) stack.push_back({i + 1, next});
      if (e < f.exponent[i]) q *= f.prime[i];
    }
  }
}

}  // namespace

ComplexityTable ComplexityTable::build(std::uint64_t limit,
                                       std::uint64_t entry_cap) {
  if (limit < 1) throw std::invalid_argument("table build: limit must be >= 1");
  if (limit > entry_cap) {
    throw resource_error("table build: limit " + std::to_string(limit) +
                         " exceeds the memory cap of " +
                         std::to_string(entry_cap) + " entries");
  }

  std::vector<std::uint8_t> v(limit + 1, 0);
  v[1] = 1;

  std::uint32_t root = 1;
  while (std::uint64_t{root + 1} * (root + 1) <= limit) ++root;
  const auto primes = sieve_primes(std::max<std::uint32_t>(root, 2));
  std::vector<std::uint64_t> divs;
  divs.reserve(64);

  for (std::uint64_t n = 2; n <= limit; ++n) {
    unsigned best = kUnset;

    const Factorization f = factorize(n, primes);
    divisors_up_to_sqrt(n, f, divs);
    for (std::uint64_t d : divs) {
      const unsigned cand = unsigned{v[d]} + v[n / d];
      if (cand < best) best = cand;
    }

    for (std::uint64_t a = 1; a <= n - a; ++a) {
      if (sum_scan_done(uint128{a} * (n - a), best)) break;
      const unsigned cand = unsigned{v[a]} + v[n - a];
      if (cand < best) best = cand;
    }

    if (best >= kUnset) {
      // Unreachable for any limit under the cap; guards the 8-bit entries.
      throw std::logic_error("table build: entry exceeds 8-bit range");
    }
    v[n] = static_cast<std::uint8_t>(best);
  }

  return ComplexityTable(limit, std::move(v));
}

void ComplexityTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open table cache for writing: " +
                                     path.string());
  out.write(kMagic, sizeof kMagic);
  out.put(static_cast<char>(kFormatVersion));
  std::uint64_t n = limit_;
  char le[8];
  for (int i = 0; i < 8; ++i) le[i] = static_cast<char>((n >> (8 * i)) & 0xff);
  out.write(le, 8);
  out.write(reinterpret_cast<const char*>(values_.data() + 1),
            static_cast<std::streamsize>(limit_));
  if (!out) throw std::runtime_error("short write to table cache: " +
                                     path.string());
}

ComplexityTable ComplexityTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open table cache: " +
                                    path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("not a complexity table cache (bad magic): " +
                             path.string());
  }
  const int version = in.get();
  if (version != kFormatVersion) {
    throw std::runtime_error("unsupported table cache version " +
                             std::to_string(version));
  }
  char le[8];
  in.read(le, 8);
  if (!in) throw std::runtime_error("truncated table cache header");
  std::uint64_t limit = 0;
  for (int i = 0; i < 8; ++i) {
    limit |= std::uint64_t{static_cast<unsigned char>(le[i])} << (8 * i);
  }
  if (limit < 1) throw std::runtime_error("table cache with empty range");

  std::vector<std::uint8_t> v(limit + 1, 0);
  in.read(reinterpret_cast<char*>(v.data() + 1),
          static_cast<std::streamsize>(limit));
  if (in.gcount() != static_cast<std::streamsize>(limit)) {
    throw std::runtime_error("truncated table cache body");
  }
  if (in.get() != std::char_traits<char>::eof()) {
    throw std::runtime_error("table cache has trailing bytes");
  }
  if (v[1] != 1) throw std::runtime_error("corrupt table cache: values[1] != 1");
  return ComplexityTable(limit, std::move(v));
}

unsigned binary_upper_bound(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("binary_upper_bound: n must be >= 1");
  int bit = 63;
  while (((n >> bit) & 1) == 0) --bit;
  unsigned count = 1;
  for (--bit; bit >= 0; --bit) {
    count += 2 + unsigned((n >> bit) & 1);
  }
  return count;
}

unsigned ComplexityOracle::operator()(std::uint64_t n) const {
  return bounded(n, 254);
}

unsigned ComplexityOracle::bounded(std::uint64_t n, unsigned budget) const {
  std::lock_guard<std::mutex> lock(mu_);
  return bounded_impl(n, budget);
}

unsigned ComplexityOracle::greedy_upper_bound(std::uint64_t n) const {
  // Peel factors of 3 and 2, subtract 1 otherwise, until the table takes
  // over.  Crude, but it keeps the branch-and-bound slack small.
  unsigned c = 0;
  while (n > table_.limit()) {
    if (n % 3 == 0) {
      c += 3;
      n /= 3;
    } else if (n % 2 == 0) {
      c += 2;
      n /= 2;
    } else {
      c += 1;
      n -= 1;
    }
  }
  return c + table_.values()[n];
}

unsigned ComplexityOracle::bounded_impl(std::uint64_t n,
                                        unsigned budget) const {
  if (n == 0) throw std::invalid_argument("complexity: n must be >= 1");
  if (n <= table_.limit()) return table_.values()[n];
  if (n > kValueCap) {
    throw resource_error(
        "complexity: n exceeds the exact-comparison value cap 2^42");
  }

  const unsigned lb = ceil_3log3(n);
  if (lb > budget) return budget + 1;
  if (auto it = exact_.find(n); it != exact_.end()) {
    return it->second <= budget ? it->second : budget + 1;
  }
  if (auto it = lower_.find(n); it != lower_.end() && it->second > budget) {
    return budget + 1;
  }

  // Values above the budget are all the same to the caller, so the search
  // never chases candidates past budget+1.
  unsigned best =
      std::min({binary_upper_bound(n), greedy_upper_bound(n), budget + 1u});

  // Product splits: every divisor pair, smaller factor up to sqrt(n).
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    const std::uint64_t m = n / d;
    const unsigned lbm = ceil_3log3(m);
    if (lbm + 2 >= best) continue;
    const unsigned cd = bounded_impl(d, best - 1 - lbm);
    if (cd > best - 1 - lbm) continue;
    const unsigned cm = bounded_impl(m, best - 1 - cd);
    if (cm <= best - 1 - cd) best = cd + cm;
  }

  // Sum splits, with the rigorous cutoff against the current best.
  for (std::uint64_t a = 1; a <= n - a; ++a) {
    if (sum_scan_done(uint128{a} * (n - a), best)) break;
    const unsigned ca = bounded_impl(a, best - 2);
    if (ca > best - 2) continue;
    const unsigned cb = bounded_impl(n - a, best - 1 - ca);
    if (cb <= best - 1 - ca) best = ca + cb;
  }

  if (best <= budget) {
    exact_[n] = best;
    return best;
  }
  auto [it, inserted] = lower_.try_emplace(n, budget + 1);
  if (!inserted) it->second = std::max(it->second, budget + 1);
  return budget + 1;
}

}  // namespace intcpx
