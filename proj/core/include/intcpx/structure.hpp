#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "intcpx/defect.hpp"
#include "intcpx/stability.hpp"

namespace intcpx {

/// One distinct defect value at truncation, with the family of n achieving
/// it collapsed to its smallest member (a leader).
struct CatalogEntry {
  ExactDefect value;
  std::uint64_t representative = 0;
  int klass = 0;                 // ||n|| mod 3, shared by every member
  std::uint8_t classes_seen = 0; // bitmask over members' classes
  std::uint64_t member_count = 0;

  std::optional<VerdictKind> stable_kind;
  std::optional<CertLevel> stable_cert;
  std::optional<unsigned> limit_degree;  // Delta(n); 0 = isolated point
};

struct DefectCatalog {
  std::uint64_t truncation = 0;
  ExactDefect bound;
  std::vector<CatalogEntry> entries;  // strictly increasing by exact compare

  nlohmann::json to_json() const;
  /// Columns: n, C, class, approx_value, limit_degree, stable_certificate.
  std::string to_csv() const;
};

/// All distinct defect values of n <= truncation with delta(n) <= bound,
/// sorted exactly and merged by value.  Chunked over n when threads > 1;
/// the exact merge makes the result independent of the thread count.
DefectCatalog enumerate_defects(std::uint64_t truncation,
                                const ExactDefect& bound,
                                const ComplexityTable& table,
                                unsigned threads = 1);

/// Delta(n) = ||n|| - ||n||_st: 0 means delta(n) is isolated in the closure
/// of the defect set, k >= 1 a limit point of degree k.
unsigned classify_limit_degree(std::uint64_t n, const StabilityScanner& scanner,
                               Policy policy);

/// Fills stability verdicts and limit degrees for every entry.
void classify_catalog(DefectCatalog& catalog, const StabilityScanner& scanner,
                      Policy policy);

/// Is C - 3 log3(n) in the closure of the defect set, i.e. C >= ||n||?
bool closure_membership(long long expression_ones, std::uint64_t n,
                        const ComplexityTable& table);

struct DisjointnessReport {
  bool pass = false;
  bool sorted_and_distinct = false;
  std::vector<std::size_t> mixed_class_entries;
  nlohmann::json to_json() const;
};
/// Catalog integrity: entries strictly increasing and no defect value seen
/// with two distinct congruence classes.
DisjointnessReport check_class_disjointness(const DefectCatalog& catalog);

/// Witness of m = b(a 3^k + 1) 3^l for some factorization ab = q.
struct CounterexampleWitness {
  std::uint64_t a = 0, b = 0;
  unsigned k = 0, l = 0;
  nlohmann::json to_json() const;
};

/// Exhaustive search over all factorizations ab = q (including a or b = 1)
/// and all k, l with b(a 3^k + 1) 3^l <= m; growth bounds every loop, so
/// exhaustiveness is unconditional.  Empty means m has no such form.
std::vector<CounterexampleWitness> counterexample_check(
    std::uint64_t q, std::uint64_t m, const ComplexityTable& table);

enum class SeriesMode { kPlain, kStable };

struct SeriesTerm {
  unsigned k = 0;
  std::uint64_t value = 0;  // b(a 3^k + 1)
  ExactDefect defect;
  CertLevel certificate = CertLevel::kCertified;
  bool exceptional = false;  // complexity fell below the naive count
  int gap_sign = 0;          // sign of (term - target), exact
};

/// The series delta(b(a 3^k + 1)) for k = 0..k_max against its limit target
/// delta_st(ab) + 1, every comparison exact.
struct ConvergenceReport {
  std::uint64_t a = 0, b = 0;
  SeriesMode mode = SeriesMode::kPlain;
  std::vector<SeriesTerm> terms;
  ExactDefect target;
  CertLevel target_cert = CertLevel::kCertified;
  bool strictly_increasing = false;  // over the non-exceptional terms
  bool bounded_by_target = false;    // every term strictly below the target
  nlohmann::json to_json() const;
};
ConvergenceReport convergence_series(std::uint64_t a, std::uint64_t b,
                                     unsigned k_max,
                                     const StabilityScanner& scanner,
                                     Policy policy, SeriesMode mode);

/// Scan of ||b(a 3^k + 1)|| against ||a|| + ||b|| + 3k + 1 under the
/// off-by-one hypotheses: ab stable, ||a|| + ||b|| = ||ab|| + 1, b > 1,
/// a stable.  Failed or unresolved hypotheses yield a report, not a scan.
struct DragonsReport {
  std::uint64_t a = 0, b = 0;
  bool hypotheses_hold = false;
  bool unresolved = false;  // strict policy left a hypothesis undecided
  CertLevel hypothesis_cert = CertLevel::kCertified;
  std::string failed_hypothesis;  // empty when hypotheses hold

  struct Step {
    unsigned k = 0;
    std::uint64_t value = 0;
    unsigned complexity = 0;
    unsigned expected = 0;
    bool match = false;
  };
  std::vector<Step> steps;
  std::optional<unsigned> observed_k;
  bool upper_bound_ok = true;  // ||value|| <= expected everywhere

  nlohmann::json to_json() const;
};
DragonsReport dragons_check(std::uint64_t a, std::uint64_t b, unsigned k_max,
                            const StabilityScanner& scanner, Policy policy);

}  // namespace intcpx
