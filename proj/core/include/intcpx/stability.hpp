#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "intcpx/complexity.hpp"
#include "intcpx/defect.hpp"
#include "intcpx/errors.hpp"

namespace intcpx {

/// How downstream consumers treat verdicts that are not certified.
enum class Policy { kStrict, kAssume };

enum class CertLevel { kCertified, kHorizonAssumed };

enum class VerdictKind {
  kStableCertified,
  kUnstableCertified,
  kUnknownAtHorizon,
};

std::string to_string(VerdictKind kind);
std::string to_string(CertLevel level);
Policy policy_from_string(const std::string& s);

/// Result of scanning the ladder n, 3n, 9n, ... to a finite horizon.
///
/// Two closing certificates are implemented: a tail defect below 1 (any
/// further drop would make the defect negative) and propagation through a
/// certified additive factorization.  Everything else stays UnknownAtHorizon.
struct StabilityVerdict {
  std::uint64_t n = 0;
  VerdictKind kind = VerdictKind::kUnknownAtHorizon;
  unsigned horizon = 0;

  /// Exact K(n) when certified; K(n) >= k_lower_bound always.
  std::optional<unsigned> k;
  unsigned k_lower_bound = 0;

  /// ||n||_st at the stated certificate level.  Horizon-assumed means the
  /// minimum of ||3^j n|| - 3j over the scanned j, an upper bound on the
  /// true stable complexity.
  unsigned stable_complexity = 0;
  CertLevel certificate = CertLevel::kHorizonAssumed;

  nlohmann::json to_json() const;
};

/// delta(n) < 1 forces stability: the defect can only drop by whole
/// integers and never below 0.  Sound but not complete.
bool stable_by_small_defect(std::uint64_t n, const ComplexityTable& table);

class StabilityScanner {
 public:
  static constexpr unsigned kDefaultHorizon = 12;

  explicit StabilityScanner(const ComplexityOracle& oracle,
                            unsigned horizon = kDefaultHorizon)
      : oracle_(oracle), horizon_(horizon) {}

  const ComplexityOracle& oracle() const noexcept { return oracle_; }
  unsigned horizon() const noexcept { return horizon_; }

  /// Scan verdict for n (cached).
  StabilityVerdict verdict(std::uint64_t n) const;

  /// Is n stable?  Unknown under the strict policy throws
  /// indeterminate_error; under assume it reports the horizon belief.
  bool is_stable(std::uint64_t n, Policy policy) const;
  CertLevel stability_certificate(std::uint64_t n) const;

  /// ||n||_st with its certificate level.  Uncertified value under the
  /// strict policy throws indeterminate_error.
  std::pair<unsigned, CertLevel> stable_complexity(std::uint64_t n,
                                                   Policy policy) const;

  /// delta_st(n) = (||n||_st, n), canonicalized.
  std::pair<ExactDefect, CertLevel> stable_defect(std::uint64_t n,
                                                  Policy policy) const;

  /// Delta(n) = ||n|| - ||n||_st.
  std::pair<unsigned, CertLevel> delta_gap(std::uint64_t n,
                                           Policy policy) const;

  /// Records an externally certified stability fact (factor propagation).
  /// Contradicting a certified-unstable verdict is a logic error.
  void note_certified_stable(std::uint64_t n) const;

 private:
  StabilityVerdict scan(std::uint64_t n) const;

  const ComplexityOracle& oracle_;
  unsigned horizon_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::uint64_t, StabilityVerdict> cache_;
};

/// Both directions of the additive-factorization stability rule, evaluated
/// on one factorization and reported piecewise.
struct GoodfacReport {
  std::uint64_t product = 0;
  std::vector<std::uint64_t> factors;
  std::vector<unsigned> factor_complexity;
  std::vector<unsigned> factor_stable_complexity;
  std::vector<VerdictKind> factor_verdicts;
  unsigned product_complexity = 0;
  unsigned product_stable_complexity = 0;
  VerdictKind product_verdict = VerdictKind::kUnknownAtHorizon;

  bool plain_additive = false;       // ||N|| = sum ||n_i||
  bool stable_additive = false;      // ||N||_st = sum ||n_i||_st
  CertLevel stable_additive_cert = CertLevel::kHorizonAssumed;

  // Direction 1: N certified stable + plain additivity => factors stable
  // (certified; Unknown factor verdicts get upgraded in the scanner).
  bool direction1_fired = false;
  std::vector<std::uint64_t> upgraded_factors;

  // Direction 2: factors stable + stable additivity => N stable.  Certified
  // only when every input is certified; otherwise horizon-assumed.
  bool direction2_fired = false;
  CertLevel direction2_cert = CertLevel::kHorizonAssumed;

  /// True when the strict policy leaves any needed verdict unresolved.
  bool indeterminate = false;

  nlohmann::json to_json() const;
};

/// Evaluates the rule on the given factorization (each factor must exceed 1).
/// Unresolved stability is reported as indeterminate, never guessed.
GoodfacReport goodfac_check(std::span<const std::uint64_t> factors,
                            const StabilityScanner& scanner, Policy policy);

}  // namespace intcpx
