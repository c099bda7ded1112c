#include "intcpx/structure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

namespace intcpx {
namespace {

struct Family {
  std::uint64_t min_n = ~std::uint64_t{0};
  std::uint8_t classes = 0;
  std::uint64_t count = 0;
};

// Canonical form (ones, arg) keys the families; members of one family have
// the same real defect value by construction.
using FamilyMap = std::map<std::pair<long long, std::uint64_t>, Family>;

void collect_range(std::uint64_t lo, std::uint64_t hi,
                   const ExactDefect& bound, const ComplexityTable& table,
                   FamilyMap& out) {
  const double bound_approx = bound.approx();
  const double log3 = std::log(3.0);
  for (std::uint64_t n = lo; n <= hi; ++n) {
    const double approx =
        table[n] - 3.0 * std::log(static_cast<double>(n)) / log3;
    if (approx > bound_approx + 0.05) continue;
    const ExactDefect d = defect_of(n, table);
    if (d.compare(bound) == std::strong_ordering::greater) continue;
    Family& f = out[{d.ones(), d.arg().get_ui()}];
    f.min_n = std::min(f.min_n, n);
    f.classes |= static_cast<std::uint8_t>(1u << (table[n] % 3));
    ++f.count;
  }
}

}  // namespace

DefectCatalog enumerate_defects(std::uint64_t truncation,
                                const ExactDefect& bound,
                                const ComplexityTable& table,
                                unsigned threads) {
  if (truncation == 0 || truncation > table.limit()) {
    throw std::out_of_range("enumerate_defects: truncation outside table");
  }
  if (threads == 0) threads = 1;

  FamilyMap families;
  if (threads == 1 || truncation < 4096) {
    collect_range(1, truncation, bound, table, families);
  } else {
    std::vector<FamilyMap> partial(threads);
    std::vector<std::thread> workers;
    const std::uint64_t chunk = (truncation + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t lo = 1 + t * chunk;
      const std::uint64_t hi = std::min(truncation, lo + chunk - 1);
      if (lo > truncation) break;
      workers.emplace_back([&, lo, hi, t] {
        collect_range(lo, hi, bound, table, partial[t]);
      });
    }
    for (auto& w : workers) w.join();
    for (const FamilyMap& part : partial) {
      for (const auto& [key, fam] : part) {
        Family& f = families[key];
        f.min_n = std::min(f.min_n, fam.min_n);
        f.classes |= fam.classes;
        f.count += fam.count;
      }
    }
  }

  DefectCatalog catalog{truncation, bound, {}};
  catalog.entries.reserve(families.size());
  for (const auto& [key, fam] : families) {
    CatalogEntry e{ExactDefect(key.first,
                               mpz_class(static_cast<unsigned long>(key.second))),
                   fam.min_n,
                   static_cast<int>(((key.first % 3) + 3) % 3),
                   fam.classes,
                   fam.count,
                   std::nullopt,
                   std::nullopt,
                   std::nullopt};
    catalog.entries.push_back(std::move(e));
  }
  std::sort(catalog.entries.begin(), catalog.entries.end(),
            [](const CatalogEntry& a, const CatalogEntry& b) {
              return a.value.compare(b.value) == std::strong_ordering::less;
            });
  return catalog;
}

unsigned classify_limit_degree(std::uint64_t n, const StabilityScanner& scanner,
                               Policy policy) {
  return scanner.delta_gap(n, policy).first;
}

void classify_catalog(DefectCatalog& catalog, const StabilityScanner& scanner,
                      Policy policy) {
  for (CatalogEntry& e : catalog.entries) {
    const StabilityVerdict v = scanner.verdict(e.representative);
    e.stable_kind = v.kind;
    e.stable_cert = v.certificate;
    e.limit_degree = scanner.delta_gap(e.representative, policy).first;
  }
}

bool closure_membership(long long expression_ones, std::uint64_t n,
                        const ComplexityTable& table) {
  return expression_ones >= static_cast<long long>(table[n]);
}

DisjointnessReport check_class_disjointness(const DefectCatalog& catalog) {
  DisjointnessReport r;
  r.sorted_and_distinct = true;
  for (std::size_t i = 0; i + 1 < catalog.entries.size(); ++i) {
    if (catalog.entries[i].value.compare(catalog.entries[i + 1].value) !=
        std::strong_ordering::less) {
      r.sorted_and_distinct = false;
    }
  }
  for (std::size_t i = 0; i < catalog.entries.size(); ++i) {
    const CatalogEntry& e = catalog.entries[i];
    const std::uint8_t expected =
        static_cast<std::uint8_t>(1u << (((e.klass % 3) + 3) % 3));
    if (e.classes_seen != expected) r.mixed_class_entries.push_back(i);
  }
  r.pass = r.sorted_and_distinct && r.mixed_class_entries.empty();
  return r;
}

nlohmann::json DisjointnessReport::to_json() const {
  return nlohmann::json{{"pass", pass},
                        {"sorted_and_distinct", sorted_and_distinct},
                        {"mixed_class_entries", mixed_class_entries}};
}

nlohmann::json CounterexampleWitness::to_json() const {
  return nlohmann::json{{"a", a}, {"b", b}, {"k", k}, {"l", l}};
}

std::vector<CounterexampleWitness> counterexample_check(
    std::uint64_t q, std::uint64_t m, const ComplexityTable& table) {
  if (q == 0 || m == 0) {
    throw std::invalid_argument("counterexample_check: arguments must be >= 1");
  }
  if (m > table.limit()) {
    throw std::out_of_range("counterexample_check: m beyond table range");
  }
  std::vector<CounterexampleWitness> witnesses;
  auto scan_split = [&](std::uint64_t a, std::uint64_t b) {
    if (b > m / 2) return;  // b(a3^k+1) >= 2b
    std::uint64_t ak = a;  // a * 3^k
    for (unsigned k = 0;; ++k) {
      if (ak + 1 > m / b) break;
      std::uint64_t v = b * (ak + 1);
      for (unsigned l = 0;; ++l) {
        if (v == m) witnesses.push_back({a, b, k, l});
        if (v > m / 3) break;
        v *= 3;
      }
      if (ak > m / 3) break;
      ak *= 3;
    }
  };
  for (std::uint64_t d = 1; d * d <= q; ++d) {
    if (q % d != 0) continue;
    scan_split(q / d, d);
    if (d != q / d) scan_split(d, q / d);
  }
  std::sort(witnesses.begin(), witnesses.end(),
            [](const CounterexampleWitness& x, const CounterexampleWitness& y) {
              return std::tie(x.a, x.b, x.k, x.l) <
                     std::tie(y.a, y.b, y.k, y.l);
            });
  return witnesses;
}

ConvergenceReport convergence_series(std::uint64_t a, std::uint64_t b,
                                     unsigned k_max,
                                     const StabilityScanner& scanner,
                                     Policy policy, SeriesMode mode) {
  if (a == 0 || b == 0) {
    throw std::invalid_argument("convergence_series: a, b must be >= 1");
  }
  const ComplexityOracle& oracle = scanner.oracle();
  if (a > ComplexityOracle::kValueCap / b) {
    throw resource_error("convergence_series: ab exceeds the value cap");
  }

  auto [ab_stable, ab_cert] = scanner.stable_complexity(a * b, policy);

  ConvergenceReport report;
  report.a = a;
  report.b = b;
  report.mode = mode;
  report.target =
      ExactDefect(static_cast<long long>(ab_stable) + 1,
                  mpz_class(static_cast<unsigned long>(a * b)));
  report.target_cert = ab_cert;

  // b = 1 contributes no factor to the expression b(a*3^k + 1).
  const unsigned naive_base = oracle(a) + (b == 1 ? 0 : oracle(b)) + 1;

  std::uint64_t ak = a;  // a * 3^k
  for (unsigned k = 0; k <= k_max; ++k) {
    if (k > 0) {
      if (ak > ComplexityOracle::kValueCap / 3) {
        throw resource_error("convergence_series: a*3^k exceeds the value cap");
      }
      ak *= 3;
    }
    if (ak + 1 > ComplexityOracle::kValueCap / b) {
      throw resource_error("convergence_series: term exceeds the value cap");
    }
    const std::uint64_t value = b * (ak + 1);

    SeriesTerm term;
    term.k = k;
    term.value = value;
    const unsigned plain = oracle(value);
    if (mode == SeriesMode::kPlain) {
      term.defect = ExactDefect(plain, mpz_class(static_cast<unsigned long>(value)));
      term.certificate = CertLevel::kCertified;
      term.exceptional = plain < naive_base + 3 * k;
    } else {
      auto [sc, cert] = scanner.stable_complexity(value, policy);
      term.defect = ExactDefect(sc, mpz_class(static_cast<unsigned long>(value)));
      term.certificate = cert;
      term.exceptional = sc < naive_base + 3 * k;
    }
    const auto cmp = term.defect.compare(report.target);
    term.gap_sign = cmp == std::strong_ordering::less    ? -1
                    : cmp == std::strong_ordering::greater ? 1
                                                           : 0;
    report.terms.push_back(std::move(term));
  }

  report.strictly_increasing = true;
  report.bounded_by_target = true;
  const SeriesTerm* prev = nullptr;
  for (const SeriesTerm& t : report.terms) {
    if (t.gap_sign >= 0) report.bounded_by_target = false;
    if (t.exceptional) continue;
    if (prev != nullptr &&
        prev->defect.compare(t.defect) != std::strong_ordering::less) {
      report.strictly_increasing = false;
    }
    prev = &t;
  }
  return report;
}

DragonsReport dragons_check(std::uint64_t a, std::uint64_t b, unsigned k_max,
                            const StabilityScanner& scanner, Policy policy) {
  DragonsReport report;
  report.a = a;
  report.b = b;
  if (a == 0 || b == 0) {
    throw std::invalid_argument("dragons_check: a, b must be >= 1");
  }
  if (b <= 1) {
    report.failed_hypothesis = "b > 1 required";
    return report;
  }
  const ComplexityOracle& oracle = scanner.oracle();
  if (a > ComplexityOracle::kValueCap / b) {
    throw resource_error("dragons_check: ab exceeds the value cap");
  }

  const unsigned ca = oracle(a), cb = oracle(b), cab = oracle(a * b);
  if (ca + cb != cab + 1) {
    report.failed_hypothesis = "||a|| + ||b|| = ||ab|| + 1 fails (" +
                               std::to_string(ca) + " + " +
                               std::to_string(cb) + " vs " +
                               std::to_string(cab) + " + 1)";
    return report;
  }

  // Stability hypotheses: unresolved under strict means no scan.
  CertLevel cert = CertLevel::kCertified;
  for (std::uint64_t x : {a * b, a}) {
    const StabilityVerdict v = scanner.verdict(x);
    if (v.kind == VerdictKind::kUnstableCertified) {
      report.failed_hypothesis = std::to_string(x) + " is unstable";
      return report;
    }
    if (v.kind == VerdictKind::kUnknownAtHorizon) {
      if (policy == Policy::kStrict) {
        report.unresolved = true;
        report.failed_hypothesis = "stability of " + std::to_string(x) +
                                   " unresolved under the strict policy";
        return report;
      }
      cert = CertLevel::kHorizonAssumed;
    }
  }

  report.hypotheses_hold = true;
  report.hypothesis_cert = cert;

  std::uint64_t ak = a;
  for (unsigned k = 0; k <= k_max; ++k) {
    if (k > 0) {
      if (ak > ComplexityOracle::kValueCap / 3) {
        throw resource_error("dragons_check: a*3^k exceeds the value cap");
      }
      ak *= 3;
    }
    if (ak + 1 > ComplexityOracle::kValueCap / b) {
      throw resource_error("dragons_check: term exceeds the value cap");
    }
    const std::uint64_t value = b * (ak + 1);
    DragonsReport::Step step;
    step.k = k;
    step.value = value;
    step.complexity = oracle(value);
    step.expected = ca + cb + 3 * k + 1;
    step.match = step.complexity == step.expected;
    if (step.complexity > step.expected) report.upper_bound_ok = false;
    report.steps.push_back(step);
  }

  for (std::size_t i = report.steps.size(); i-- > 0;) {
    if (!report.steps[i].match) {
      if (i + 1 < report.steps.size()) {
        report.observed_k = report.steps[i + 1].k;
      }
      return report;
    }
  }
  report.observed_k = 0;
  return report;
}

nlohmann::json DefectCatalog::to_json() const {
  nlohmann::json entries_json = nlohmann::json::array();
  for (const CatalogEntry& e : entries) {
    nlohmann::json j{{"value", e.value.to_json()},
                     {"n", e.representative},
                     {"class", e.klass},
                     {"members", e.member_count}};
    if (e.limit_degree) j["limit_degree"] = *e.limit_degree;
    if (e.stable_kind) j["stability"] = to_string(*e.stable_kind);
    if (e.stable_cert) j["certificate"] = to_string(*e.stable_cert);
    entries_json.push_back(std::move(j));
  }
  return nlohmann::json{{"truncation", truncation},
                        {"bound", bound.to_json()},
                        {"entries", entries_json}};
}

std::string DefectCatalog::to_csv() const {
  std::string out = "n,C,class,approx_value,limit_degree,stable_certificate\n";
  for (const CatalogEntry& e : entries) {
    // ||n|| of the representative: canonical ones plus 3 per stripped 3.
    long long threes = 0;
    for (std::uint64_t m = e.representative; m % 3 == 0; m /= 3) ++threes;
    out += std::to_string(e.representative) + ",";
    out += std::to_string(e.value.ones() + 3 * threes);
    out += "," + std::to_string(e.klass);
    out += "," + e.value.approx_string();
    out += ",";
    if (e.limit_degree) out += std::to_string(*e.limit_degree);
    out += ",";
    if (e.stable_kind) {
      out += to_string(*e.stable_kind) + "/" + to_string(*e.stable_cert);
    }
    out += "\n";
  }
  return out;
}

nlohmann::json ConvergenceReport::to_json() const {
  nlohmann::json terms_json = nlohmann::json::array();
  for (const SeriesTerm& t : terms) {
    terms_json.push_back({{"k", t.k},
                          {"value", t.value},
                          {"defect", t.defect.to_json()},
                          {"certificate", to_string(t.certificate)},
                          {"exceptional", t.exceptional},
                          {"gap_sign", t.gap_sign}});
  }
  return nlohmann::json{
      {"a", a},
      {"b", b},
      {"mode", mode == SeriesMode::kPlain ? "plain" : "stable"},
      {"terms", terms_json},
      {"target", target.to_json()},
      {"target_certificate", to_string(target_cert)},
      {"strictly_increasing", strictly_increasing},
      {"bounded_by_target", bounded_by_target}};
}

nlohmann::json DragonsReport::to_json() const {
  nlohmann::json steps_json = nlohmann::json::array();
  for (const Step& s : steps) {
    steps_json.push_back({{"k", s.k},
                          {"value", s.value},
                          {"complexity", s.complexity},
                          {"expected", s.expected},
                          {"match", s.match}});
  }
  nlohmann::json j{{"a", a},
                   {"b", b},
                   {"hypotheses_hold", hypotheses_hold},
                   {"unresolved", unresolved},
                   {"hypothesis_certificate", to_string(hypothesis_cert)},
                   {"failed_hypothesis", failed_hypothesis},
                   {"steps", steps_json},
                   {"upper_bound_ok", upper_bound_ok}};
  if (observed_k) {
    j["observed_K"] = *observed_k;
  } else {
    j["observed_K"] = nullptr;
  }
  return j;
}

}  // namespace intcpx
