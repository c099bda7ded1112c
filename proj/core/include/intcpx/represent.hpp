#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "intcpx/ldpoly.hpp"

namespace intcpx {

/// An exponent tuple with f(3^{n1},...,3^{nd}) * 3^{n_{d+1}} = target.
struct RepresentationWitness {
  std::vector<unsigned> exponents;
  std::optional<unsigned> augmented_exponent;
  mpz_class target;
  bool efficient = false;

  unsigned long exponent_sum() const {
    unsigned long s = augmented_exponent.value_or(0);
    for (unsigned e : exponents) s += e;
    return s;
  }
  nlohmann::json to_json() const;
};

/// Complete list of exponent tuples representing N, ordered by nondecreasing
/// exponent sum.  The search walks each variable upward and cuts off once
/// the minimum completion (remaining exponents zero) exceeds N; augmented
/// mode additionally strips trailing powers of 3 off N.
std::vector<RepresentationWitness> find_representations(const LowDefectPoly& f,
                                                        const mpz_class& N,
                                                        bool augmented);

struct EfficiencyResult {
  bool efficient = false;
  std::optional<RepresentationWitness> witness;
};

/// Does some witness satisfy ||N|| = C + 3 * (sum of exponents)?
EfficiencyResult is_efficiently_represented(const LowDefectPair& p,
                                            const mpz_class& N,
                                            const ComplexityOracle& oracle,
                                            bool augmented);

enum class ExceptionalMode { kPlain, kStable };

/// Exceptional tuples of the pair over a box of per-variable exponent
/// bounds (inclusive).  Stable mode uses ||value||_st; plain mode uses
/// ||value|| (for when stability is unresolved).
struct ExceptionalSet {
  std::vector<std::vector<unsigned>> tuples;
  CertLevel certificate = CertLevel::kCertified;
};
ExceptionalSet exceptional_set(const LowDefectPair& p,
                               std::span<const unsigned> box,
                               const StabilityScanner& scanner, Policy policy,
                               ExceptionalMode mode);

/// Degree-1 scan: the least K <= k_max with no exceptional k in [K, k_max],
/// plus every exceptional k found.  No such K (k_max itself exceptional)
/// leaves k_observed empty.
struct MinimalKResult {
  std::optional<unsigned> k_observed;
  std::vector<unsigned> exceptional;
  unsigned k_max = 0;
  CertLevel certificate = CertLevel::kCertified;
  nlohmann::json to_json() const;
};
MinimalKResult minimal_k_degree1(const LowDefectPair& p, unsigned k_max,
                                 const StabilityScanner& scanner,
                                 Policy policy, ExceptionalMode mode);

/// A leader is the smallest number with its defect: 3 does not divide n, or
/// ||n|| < 3 + ||n/3||.
bool is_leader(std::uint64_t n, const ComplexityTable& table);
std::vector<std::uint64_t> leaders(std::uint64_t limit,
                                   const ComplexityTable& table);
/// Strips factors of 3 while ||n|| = ||n/3|| + 3; the remaining m is the
/// unique leader with delta(m) = delta(n), and ||n|| = ||m|| + 3k.
std::pair<std::uint64_t, unsigned> leader_decompose(
    std::uint64_t n, const ComplexityTable& table);

/// Truncated good-covering verification: (1) every leader n <= N with
/// delta(n) <= s is efficiently 3-represented by some candidate pair, and
/// (2) every candidate has delta(f, C) <= s.  Violations are listed, never
/// thrown.
struct CoveringReport {
  bool pass = false;
  std::vector<std::size_t> bound_violations;   // candidate indices
  std::vector<std::uint64_t> uncovered_leaders;
  std::uint64_t truncation = 0;
  nlohmann::json to_json() const;
};
CoveringReport verify_covering(std::span<const LowDefectPair> candidates,
                               const ExactDefect& s, std::uint64_t truncation,
                               const ComplexityTable& table);

}  // namespace intcpx
