#include "intcpx/represent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace intcpx {

nlohmann::json RepresentationWitness::to_json() const {
  nlohmann::json j{{"exponents", exponents},
                   {"target", target.get_str()},
                   {"efficient", efficient}};
  if (augmented_exponent) {
    j["augmented_exponent"] = *augmented_exponent;
  } else {
    j["augmented_exponent"] = nullptr;
  }
  return j;
}

std::vector<RepresentationWitness> find_representations(const LowDefectPoly& f,
                                                        const mpz_class& N,
                                                        bool augmented) {
  if (f.augmented()) {
    throw std::invalid_argument(
        "find_representations: pass the plain polynomial and augmented=true");
  }
  if (N < 1) throw std::invalid_argument("find_representations: N must be >= 1");

  std::vector<std::pair<mpz_class, std::optional<unsigned>>> targets;
  if (!augmented) {
    targets.emplace_back(N, std::nullopt);
  } else {
    mpz_class t = N;
    unsigned j = 0;
    targets.emplace_back(t, j);
    while (mpz_divisible_ui_p(t.get_mpz_t(), 3)) {
      mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), 3);
      targets.emplace_back(t, ++j);
    }
  }

  const int d = f.degree();
  std::vector<RepresentationWitness> out;
  std::vector<unsigned> exps(d, 0);

  for (const auto& [target, augexp] : targets) {
    auto dfs = [&](auto&& self, int i) -> void {
      if (i == d) {
        if (f.evaluate(exps) == target) {
          RepresentationWitness w;
          w.exponents = exps;
          w.augmented_exponent = augexp;
          w.target = N;
          out.push_back(std::move(w));
        }
        return;
      }
      for (unsigned e = 0;; ++e) {
        exps[i] = e;
        if (f.min_completion(std::span<const unsigned>(exps).first(i + 1)) >
            target) {
          break;
        }
        self(self, i + 1);
      }
      exps[i] = 0;
    };
    dfs(dfs, 0);
  }

  std::sort(out.begin(), out.end(),
            [](const RepresentationWitness& a, const RepresentationWitness& b) {
              if (a.exponent_sum() != b.exponent_sum()) {
                return a.exponent_sum() < b.exponent_sum();
              }
              return a.exponents < b.exponents;
            });
  return out;
}

EfficiencyResult is_efficiently_represented(const LowDefectPair& p,
                                            const mpz_class& N,
                                            const ComplexityOracle& oracle,
                                            bool augmented) {
  const unsigned target_complexity = complexity_of(N, oracle);
  for (RepresentationWitness& w :
       find_representations(p.poly, N, augmented)) {
    if (p.base_complexity + 3ll * static_cast<long long>(w.exponent_sum()) ==
        target_complexity) {
      w.efficient = true;
      return {true, std::move(w)};
    }
  }
  return {false, std::nullopt};
}

ExceptionalSet exceptional_set(const LowDefectPair& p,
                               std::span<const unsigned> box,
                               const StabilityScanner& scanner, Policy policy,
                               ExceptionalMode mode) {
  const int d = p.poly.degree();
  if (box.size() != static_cast<std::size_t>(d)) {
    throw std::invalid_argument("exceptional_set: box arity mismatch");
  }
  const ComplexityOracle& oracle = scanner.oracle();

  ExceptionalSet result;
  std::vector<std::string> offenders;
  std::vector<unsigned> exps(d, 0);

  auto format_tuple = [](const std::vector<unsigned>& t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(t[i]);
    }
    return s + ")";
  };

  auto visit = [&]() {
    const mpz_class value = p.poly.evaluate(exps);
    const unsigned plain = complexity_of(value, oracle);
    long long naive = p.base_complexity;
    for (unsigned e : exps) naive += 3ll * e;

    if (mode == ExceptionalMode::kPlain) {
      if (plain < naive) result.tuples.push_back(exps);
      return;
    }

    // Stable mode.  The scanned minimum bounds ||value||_st from above, so
    // falling below the naive count is certified even without a closed
    // verdict; staying at or above it is only certified when the verdict is.
    const StabilityVerdict v = scanner.verdict(value.get_ui());
    if (v.stable_complexity < naive) {
      result.tuples.push_back(exps);
      return;
    }
    if (v.certificate != CertLevel::kCertified) {
      result.certificate = CertLevel::kHorizonAssumed;
      if (policy == Policy::kStrict) offenders.push_back(format_tuple(exps));
    }
  };

  auto odometer = [&](auto&& self, int i) -> void {
    if (i == d) {
      visit();
      return;
    }
    for (unsigned e = 0; e <= box[i]; ++e) {
      exps[i] = e;
      self(self, i + 1);
    }
    exps[i] = 0;
  };
  odometer(odometer, 0);

  if (!offenders.empty()) {
    std::string msg =
        "exceptional_set: stability unresolved under the strict policy for "
        "tuples:";
    for (const auto& t : offenders) msg += " " + t;
    throw indeterminate_error(msg);
  }
  return result;
}

nlohmann::json MinimalKResult::to_json() const {
  nlohmann::json j{{"exceptional", exceptional},
                   {"k_max", k_max},
                   {"certificate", to_string(certificate)}};
  if (k_observed) {
    j["K_observed"] = *k_observed;
  } else {
    j["K_observed"] = nullptr;
  }
  return j;
}

MinimalKResult minimal_k_degree1(const LowDefectPair& p, unsigned k_max,
                                 const StabilityScanner& scanner,
                                 Policy policy, ExceptionalMode mode) {
  if (p.poly.degree() != 1) {
    throw std::invalid_argument("minimal_k_degree1: pair must have degree 1");
  }
  const unsigned box[1] = {k_max};
  ExceptionalSet ex = exceptional_set(p, box, scanner, policy, mode);

  MinimalKResult r;
  r.k_max = k_max;
  r.certificate = ex.certificate;
  for (const auto& t : ex.tuples) r.exceptional.push_back(t[0]);
  if (r.exceptional.empty()) {
    r.k_observed = 0;
  } else if (r.exceptional.back() < k_max) {
    r.k_observed = r.exceptional.back() + 1;
  }
  return r;
}

bool is_leader(std::uint64_t n, const ComplexityTable& table) {
  if (n % 3 != 0) return true;
  if (n == 0) throw std::invalid_argument("is_leader: n must be >= 1");
  return table[n] < 3 + table[n / 3];
}

std::vector<std::uint64_t> leaders(std::uint64_t limit,
                                   const ComplexityTable& table) {
  if (limit > table.limit()) {
    throw std::out_of_range("leaders: limit beyond table range");
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    if (is_leader(n, table)) out.push_back(n);
  }
  return out;
}

std::pair<std::uint64_t, unsigned> leader_decompose(
    std::uint64_t n, const ComplexityTable& table) {
  if (n == 0 || n > table.limit()) {
    throw std::out_of_range("leader_decompose: n outside table range");
  }
  unsigned k = 0;
  while (n % 3 == 0 && table[n] == table[n / 3] + 3) {
    n /= 3;
    ++k;
  }
  return {n, k};
}

nlohmann::json CoveringReport::to_json() const {
  return nlohmann::json{{"pass", pass},
                        {"bound_violations", bound_violations},
                        {"uncovered_leaders", uncovered_leaders},
                        {"truncation", truncation}};
}

CoveringReport verify_covering(std::span<const LowDefectPair> candidates,
                               const ExactDefect& s, std::uint64_t truncation,
                               const ComplexityTable& table) {
  if (truncation > table.limit()) {
    throw std::out_of_range("verify_covering: truncation beyond table range");
  }
  CoveringReport report;
  report.truncation = truncation;

  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (delta_pair(candidates[i]).compare(s) == std::strong_ordering::greater) {
      report.bound_violations.push_back(i);
    }
  }

  // Coarse float screen, then exact comparison near the boundary.
  const double s_approx = s.approx();
  const double log3 = std::log(3.0);
  for (std::uint64_t n = 1; n <= truncation; ++n) {
    const double approx =
        table[n] - 3.0 * std::log(static_cast<double>(n)) / log3;
    if (approx > s_approx + 0.05) continue;
    if (!is_leader(n, table)) continue;
    const ExactDefect d = defect_of(n, table);
    if (d.compare(s) == std::strong_ordering::greater) continue;

    bool covered = false;
    const mpz_class target(static_cast<unsigned long>(n));
    for (const LowDefectPair& cand : candidates) {
      for (const RepresentationWitness& w :
           find_representations(cand.poly, target, false)) {
        if (cand.base_complexity +
                3ll * static_cast<long long>(w.exponent_sum()) ==
            table[n]) {
          covered = true;
          break;
        }
      }
      if (covered) break;
    }
    if (!covered) report.uncovered_leaders.push_back(n);
  }

  report.pass =
      report.bound_violations.empty() && report.uncovered_leaders.empty();
  return report;
}

}  // namespace intcpx
