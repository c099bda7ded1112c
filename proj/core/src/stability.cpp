#include "intcpx/stability.hpp"

#include <algorithm>
#include <stdexcept>

namespace intcpx {

std::string to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kStableCertified:
      return "StableCertified";
    case VerdictKind::kUnstableCertified:
      return "UnstableCertified";
    case VerdictKind::kUnknownAtHorizon:
      return "UnknownAtHorizon";
  }
  return "?";
}

std::string to_string(CertLevel level) {
  return level == CertLevel::kCertified ? "certified" : "horizon-assumed";
}

Policy policy_from_string(const std::string& s) {
  if (s == "strict") return Policy::kStrict;
  if (s == "assume") return Policy::kAssume;
  throw std::invalid_argument("policy must be 'strict' or 'assume'");
}

nlohmann::json StabilityVerdict::to_json() const {
  nlohmann::json j{{"n", n},
                   {"kind", to_string(kind)},
                   {"horizon", horizon},
                   {"K_lower_bound", k_lower_bound},
                   {"stable_complexity", stable_complexity},
                   {"certificate", to_string(certificate)}};
  if (k) {
    j["K"] = *k;
  } else {
    j["K"] = nullptr;
  }
  return j;
}

bool stable_by_small_defect(std::uint64_t n, const ComplexityTable& table) {
  return defect_of(n, table).less_than_int(1);
}

StabilityVerdict StabilityScanner::verdict(std::uint64_t n) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = cache_.find(n); it != cache_.end()) return it->second;
  }
  StabilityVerdict v = scan(n);
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = cache_.try_emplace(n, v);
  return it->second;
}

StabilityVerdict StabilityScanner::scan(std::uint64_t n) const {
  if (n == 0) throw std::invalid_argument("stability scan: n must be >= 1");

  std::vector<unsigned> c(horizon_ + 1);
  c[0] = oracle_(n);

  std::uint64_t m = n;
  unsigned last_drop = 0;
  bool any_drop = false;
  for (unsigned k = 1; k <= horizon_; ++k) {
    if (m > ComplexityOracle::kValueCap / 3) {
      throw resource_error("stability scan: 3^k*n exceeds the value cap 2^42");
    }
    m *= 3;
    const unsigned ub = c[k - 1] + 3;
    c[k] = oracle_.bounded(m, ub);
    if (c[k] > ub) {
      // ||3m|| <= ||m||+3 unconditionally; a violation is a build error.
      throw std::logic_error("stability scan: defect increased along 3^k n");
    }
    if (c[k] < ub) {
      any_drop = true;
      last_drop = k;
    }
  }

  StabilityVerdict out;
  out.n = n;
  out.horizon = horizon_;

  // Defect of the tail point 3^L n; below 1 it can never drop again.
  mpz_class tail_arg(static_cast<unsigned long>(n));
  for (unsigned k = 0; k < last_drop; ++k) tail_arg *= 3;
  const bool tail_small =
      ExactDefect(c[last_drop], tail_arg).less_than_int(1);

  if (!any_drop) {
    if (tail_small) {
      out.kind = VerdictKind::kStableCertified;
      out.k = 0;
      out.k_lower_bound = 0;
      out.stable_complexity = c[0];
      out.certificate = CertLevel::kCertified;
    } else {
      out.kind = VerdictKind::kUnknownAtHorizon;
      out.k_lower_bound = 0;
      out.stable_complexity = c[0];
      out.certificate = CertLevel::kHorizonAssumed;
    }
    return out;
  }

  out.kind = VerdictKind::kUnstableCertified;
  out.k_lower_bound = last_drop;
  if (tail_small) {
    out.k = last_drop;
    out.stable_complexity = c[last_drop] - 3 * last_drop;
    out.certificate = CertLevel::kCertified;
  } else {
    out.stable_complexity = c[horizon_] - 3 * horizon_;
    out.certificate = CertLevel::kHorizonAssumed;
  }
  return out;
}

bool StabilityScanner::is_stable(std::uint64_t n, Policy policy) const {
  const StabilityVerdict v = verdict(n);
  switch (v.kind) {
    case VerdictKind::kStableCertified:
      return true;
    case VerdictKind::kUnstableCertified:
      return false;
    case VerdictKind::kUnknownAtHorizon:
      if (policy == Policy::kStrict) {
        throw indeterminate_error("stability of " + std::to_string(n) +
                                  " unresolved at horizon " +
                                  std::to_string(horizon_) +
                                  " under the strict policy");
      }
      return true;  // no drop observed; horizon belief
  }
  return false;
}

CertLevel StabilityScanner::stability_certificate(std::uint64_t n) const {
  return verdict(n).kind == VerdictKind::kUnknownAtHorizon
             ? CertLevel::kHorizonAssumed
             : CertLevel::kCertified;
}

std::pair<unsigned, CertLevel> StabilityScanner::stable_complexity(
    std::uint64_t n, Policy policy) const {
  const StabilityVerdict v = verdict(n);
  if (v.certificate == CertLevel::kHorizonAssumed &&
      policy == Policy::kStrict) {
    throw indeterminate_error("stable complexity of " + std::to_string(n) +
                              " not certified at horizon " +
                              std::to_string(horizon_) +
                              " under the strict policy");
  }
  return {v.stable_complexity, v.certificate};
}

std::pair<ExactDefect, CertLevel> StabilityScanner::stable_defect(
    std::uint64_t n, Policy policy) const {
  auto [value, cert] = stable_complexity(n, policy);
  return {ExactDefect(value, mpz_class(static_cast<unsigned long>(n))), cert};
}

std::pair<unsigned, CertLevel> StabilityScanner::delta_gap(
    std::uint64_t n, Policy policy) const {
  auto [value, cert] = stable_complexity(n, policy);
  return {oracle_(n) - value, cert};
}

void StabilityScanner::note_certified_stable(std::uint64_t n) const {
  StabilityVerdict v;
  v.n = n;
  v.horizon = horizon_;
  v.kind = VerdictKind::kStableCertified;
  v.k = 0;
  v.k_lower_bound = 0;
  v.stable_complexity = oracle_(n);
  v.certificate = CertLevel::kCertified;

  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = cache_.try_emplace(n, v);
  if (!inserted) {
    if (it->second.kind == VerdictKind::kUnstableCertified) {
      throw std::logic_error("stability propagation contradicts a certified"
                             " unstable verdict for " + std::to_string(n));
    }
    it->second = v;
  }
}

GoodfacReport goodfac_check(std::span<const std::uint64_t> factors,
                            const StabilityScanner& scanner, Policy policy) {
  if (factors.size() < 2) {
    throw std::invalid_argument("goodfac: need at least two factors");
  }
  for (std::uint64_t f : factors) {
    if (f <= 1) throw std::invalid_argument("goodfac: factors must exceed 1");
  }

  GoodfacReport r;
  r.factors.assign(factors.begin(), factors.end());
  std::uint64_t product = 1;
  for (std::uint64_t f : factors) {
    if (product > ComplexityOracle::kValueCap / f) {
      throw resource_error("goodfac: product exceeds the value cap 2^42");
    }
    product *= f;
  }
  r.product = product;

  const ComplexityOracle& cpx = scanner.oracle();
  unsigned sum_plain = 0, sum_stable = 0;
  bool all_factors_stable_seen = true;
  CertLevel weakest = CertLevel::kCertified;
  for (std::uint64_t f : factors) {
    const StabilityVerdict v = scanner.verdict(f);
    r.factor_verdicts.push_back(v.kind);
    r.factor_complexity.push_back(cpx(f));
    r.factor_stable_complexity.push_back(v.stable_complexity);
    sum_plain += r.factor_complexity.back();
    sum_stable += v.stable_complexity;
    if (v.kind == VerdictKind::kUnstableCertified) {
      all_factors_stable_seen = false;
    } else if (v.kind == VerdictKind::kUnknownAtHorizon) {
      weakest = CertLevel::kHorizonAssumed;
    }
    if (v.certificate == CertLevel::kHorizonAssumed) {
      weakest = CertLevel::kHorizonAssumed;
    }
  }

  const StabilityVerdict pv = scanner.verdict(product);
  r.product_verdict = pv.kind;
  r.product_complexity = cpx(product);
  r.product_stable_complexity = pv.stable_complexity;
  if (pv.certificate == CertLevel::kHorizonAssumed) {
    weakest = CertLevel::kHorizonAssumed;
  }

  r.plain_additive = (r.product_complexity == sum_plain);
  r.stable_additive = (r.product_stable_complexity == sum_stable);
  r.stable_additive_cert = weakest;

  // Direction 1: stable product with plain additivity certifies the factors.
  if (pv.kind == VerdictKind::kStableCertified && r.plain_additive) {
    r.direction1_fired = true;
    for (std::size_t i = 0; i < r.factors.size(); ++i) {
      if (r.factor_verdicts[i] == VerdictKind::kUnknownAtHorizon) {
        scanner.note_certified_stable(r.factors[i]);
        r.upgraded_factors.push_back(r.factors[i]);
        r.factor_verdicts[i] = VerdictKind::kStableCertified;
      } else if (r.factor_verdicts[i] == VerdictKind::kUnstableCertified) {
        throw std::logic_error(
            "goodfac: certified stable additive product with a certified"
            " unstable factor");
      }
    }
  }

  // Direction 2: stable factors with stable additivity imply a stable
  // product; certified only when every input value is certified.
  if (all_factors_stable_seen && r.stable_additive) {
    r.direction2_fired = true;
    r.direction2_cert = weakest;
  }

  if (policy == Policy::kStrict && weakest == CertLevel::kHorizonAssumed) {
    r.indeterminate = true;
  }
  return r;
}

nlohmann::json GoodfacReport::to_json() const {
  nlohmann::json jf = nlohmann::json::array();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    jf.push_back({{"n", factors[i]},
                  {"complexity", factor_complexity[i]},
                  {"stable_complexity", factor_stable_complexity[i]},
                  {"verdict", to_string(factor_verdicts[i])}});
  }
  return nlohmann::json{
      {"product", product},
      {"factors", jf},
      {"product_complexity", product_complexity},
      {"product_stable_complexity", product_stable_complexity},
      {"product_verdict", to_string(product_verdict)},
      {"plain_additive", plain_additive},
      {"stable_additive", stable_additive},
      {"stable_additive_certificate", to_string(stable_additive_cert)},
      {"direction1_fired", direction1_fired},
      {"upgraded_factors", upgraded_factors},
      {"direction2_fired", direction2_fired},
      {"direction2_certificate", to_string(direction2_cert)},
      {"indeterminate", indeterminate}};
}

}  // namespace intcpx
