// Acceptance suite: runs every acceptance criterion end to end against a
// freshly built table and prints one PASS/FAIL line per criterion.
// Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "intcpx/complexity.hpp"
#include "intcpx/defect.hpp"
#include "intcpx/expression.hpp"
#include "intcpx/ldpoly.hpp"
#include "intcpx/represent.hpp"
#include "intcpx/stability.hpp"
#include "intcpx/structure.hpp"
#include "support.hpp"

using namespace intcpx;

namespace {

struct Criterion {
  int id;
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { notes.push_back("     " + what); }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

LowDefectPair random_pair(std::mt19937& rng, const ComplexityOracle& oracle,
                          int budget) {
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> small(1, 9);
  std::uniform_int_distribution<int> slack(0, 1);
  if (budget <= 0 || kind(rng) == 0) {
    const mpz_class c = small(rng);
    return constant_pair(c, complexity_of(c, oracle) + slack(rng), oracle);
  }
  if (kind(rng) == 1) {
    return tensor(random_pair(rng, oracle, budget - 1),
                  random_pair(rng, oracle, budget - 1));
  }
  return extend(random_pair(rng, oracle, budget - 1), 1, 1, oracle);
}

}  // namespace

int main() {
  std::vector<Criterion> results;

  // ---- Criterion 1: spot values and build timings -------------------------
  const auto t1_start = std::chrono::steady_clock::now();
  const ComplexityTable table = ComplexityTable::build(3'000'000);
  const double build_3e6 = seconds_since(t1_start);
  const ComplexityOracle oracle(table);
  const StabilityScanner scanner(oracle, 12);

  {
    Criterion c{1};
    c.check(table[11] == 8, "||11|| = 8");
    c.check(table[1094] == 22, "||1094|| = 22");
    c.check(table[2188] == 22, "||2188|| = 22");
    std::uint64_t p = 1;
    bool powers_ok = true;
    for (unsigned k = 1; k <= 7; ++k) {
      p *= 3;
      powers_ok = powers_ok && table[p] == 3 * k;
    }
    c.check(powers_ok, "||3^k|| = 3k for k = 1..7");
    c.check(build_3e6 < 120.0,
            "build to 3e6 in " + fmt(build_3e6) + "s (< 120s)");
    const auto big_start = std::chrono::steady_clock::now();
    {
      const ComplexityTable big = ComplexityTable::build(30'000'000);
      const double build_3e7 = seconds_since(big_start);
      c.check(build_3e7 < 1200.0,
              "build to 3e7 in " + fmt(build_3e7) + "s (< 1200s)");
      c.check(big[2188] == 22 && big[29999999] >= ceil_3log3(29999999),
              "large table self-consistent at both ends");
    }
    results.push_back(std::move(c));
  }

  // ---- Criterion 2: breadth-first oracle equivalence up to 60 -------------
  {
    Criterion c{2};
    const auto bfs = testsupport::bfs_ones_oracle(60);
    bool all = true;
    for (std::uint64_t n = 1; n <= 60; ++n) {
      if (table[n] != bfs[n]) {
        all = false;
        c.check(false, "||" + std::to_string(n) + "|| table " +
                           std::to_string(table[n]) + " vs oracle " +
                           std::to_string(bfs[n]));
      }
    }
    c.check(all, "table equals the ones-count oracle for n <= 60");
    results.push_back(std::move(c));
  }

  // ---- Criterion 3: defect exactness --------------------------------------
  {
    Criterion c{3};
    std::uint64_t p = 1;
    bool zeros = true;
    for (unsigned k = 1; k <= 7; ++k) {
      p *= 3;
      zeros = zeros && defect_of(p, table) == ExactDefect();
    }
    c.check(zeros, "delta(3^k) = 0 for k = 1..7");
    c.check(defect_of(1, table) == ExactDefect(1, 1), "delta(1) = 1");

    mpz_class p21;
    mpz_ui_pow_ui(p21.get_mpz_t(), 3, 21);
    const mpz_class cube = mpz_class(2188) * 2188 * 2188;
    c.check(p21 < cube, "3^21 < 2188^3 in big integers");
    c.check(defect_of(2188, table).less_than_int(1), "delta(2188) < 1");
    results.push_back(std::move(c));
  }

  // ---- Criterion 4: stability suite ----------------------------------------
  {
    Criterion c{4};
    const StabilityVerdict v1 = scanner.verdict(1);
    c.check(v1.kind == VerdictKind::kUnstableCertified && v1.k == 1 &&
                v1.stable_complexity == 0 &&
                v1.certificate == CertLevel::kCertified,
            "1 -> UnstableCertified, K = 1, ||1||_st = 0");
    c.check(scanner.verdict(2).kind == VerdictKind::kStableCertified,
            "2 -> StableCertified via delta < 1");
    c.check(scanner.verdict(2188).kind == VerdictKind::kStableCertified,
            "2188 -> StableCertified via delta < 1");

    const StabilityVerdict v8 = scanner.verdict(8);
    c.check(v8.kind == VerdictKind::kUnstableCertified,
            "8 -> UnstableCertified (as stated)");
    if (v8.kind != VerdictKind::kUnstableCertified) {
      c.note("||8|| = 6 via (1+1)(1+1)(1+1), so delta(8) < 1 and 8 is "
             "provably stable; the stated verdict is unattainable");
    }
    c.check(v8.stable_complexity == 6 &&
                v8.certificate == CertLevel::kCertified,
            "||8||_st = 6, certified");

    const std::uint64_t factors[] = {8, 107};
    const GoodfacReport g = goodfac_check(factors, scanner, Policy::kAssume);
    c.check(g.stable_additive,
            "||8||_st + ||107||_st = ||856||_st (" +
                std::to_string(g.factor_stable_complexity[0]) + " + " +
                std::to_string(g.factor_stable_complexity[1]) + " = " +
                std::to_string(g.product_stable_complexity) + ", " +
                to_string(g.stable_additive_cert) + ")");
    c.check(!g.plain_additive,
            "||8|| + ||107|| != ||856|| (" +
                std::to_string(g.factor_complexity[0]) + " + " +
                std::to_string(g.factor_complexity[1]) + " vs " +
                std::to_string(g.product_complexity) + ")");
    results.push_back(std::move(c));
  }

  // ---- Criterion 5: counterexample searches --------------------------------
  {
    Criterion c{5};
    for (const auto& [q, m] :
         std::vector<std::pair<std::uint64_t, std::uint64_t>>{
             {64, 70}, {32, 35}, {5, 1280}}) {
      const auto start = std::chrono::steady_clock::now();
      const auto witnesses = counterexample_check(q, m, table);
      const double elapsed = seconds_since(start);
      c.check(witnesses.empty() && elapsed < 1.0,
              std::to_string(m) + " has no form b(a*3^k+1)*3^l with ab = " +
                  std::to_string(q) + " (" + fmt(elapsed) + "s)");
    }
    results.push_back(std::move(c));
  }

  // ---- Criterion 6: the off-by-two upper-bound family ----------------------
  {
    Criterion c{6};
    bool bounds = true, exceptional = true;
    const LowDefectPair p = make_pair("2*(1094*x1+1)", 25, oracle);
    std::uint64_t pow = 1;
    for (unsigned k = 0; k <= 6; ++k) {
      const std::uint64_t value = 2 * (1094 * pow + 1);
      bounds = bounds && table[value] <= 24 + 3 * k;
      pow *= 3;
    }
    c.check(bounds, "||2(1094*3^k+1)|| <= 24 + 3k for k = 0..6");
    const unsigned box[1] = {6};
    const ExceptionalSet ex = exceptional_set(p, box, scanner, Policy::kAssume,
                                              ExceptionalMode::kPlain);
    exceptional = ex.tuples.size() == 7;
    c.check(exceptional, "every scanned k is exceptional for (2(1094x+1), 25)");
    results.push_back(std::move(c));
  }

  // ---- Criterion 7: degree-1 threshold scans --------------------------------
  {
    Criterion c{7};
    const MinimalKResult good =
        minimal_k_degree1(make_pair("2*x1+1", 3, oracle), 12, scanner,
                          Policy::kStrict, ExceptionalMode::kPlain);
    c.check(good.k_observed == 0 && good.exceptional.empty(),
            "2x+1 has an empty exceptional set for k <= 12");
    bool equalities = true;
    std::uint64_t pow = 1;
    for (unsigned k = 0; k <= 12; ++k) {
      equalities = equalities && table[2 * pow + 1] == 3 * k + 3;
      pow *= 3;
    }
    c.check(equalities, "||2*3^k + 1|| = 3k + 3 for k <= 12");

    const MinimalKResult bad =
        minimal_k_degree1(make_pair("x1+1", 2, oracle), 4, scanner,
                          Policy::kStrict, ExceptionalMode::kPlain);
    c.check(std::count(bad.exceptional.begin(), bad.exceptional.end(), 1) == 1,
            "x+1 (unstable a = 1) is exceptional at k = 1");
    results.push_back(std::move(c));
  }

  // ---- Criterion 8: substantiality suite ------------------------------------
  {
    Criterion c{8};
    bool canonical_ok = true;
    for (unsigned k = 0; k <= 4; ++k) {
      const LowDefectPair p =
          canonical_substantial(2, k, scanner, Policy::kStrict);
      canonical_ok = canonical_ok &&
                     is_substantial(p, scanner, Policy::kStrict).substantial;
    }
    c.check(canonical_ok, "(((2x1+1)x2+1)...)xk+1 substantial for k <= 4");

    const LowDefectPair bad = extend(constant_pair(2, 2, oracle), 2, 2, oracle);
    c.check(!is_substantial(bad, scanner, Policy::kStrict).substantial,
            "extension with c = 2 is insubstantial");

    const InsubstantialityGap gap = insubstantiality_gap(
        make_pair("2*(1094*x1+1)", 25, oracle), scanner, Policy::kStrict);
    c.check(gap.gap == 2 && gap.certificate == CertLevel::kCertified,
            "insubstantiality gap of (2(1094x+1), 25) is 2");

    std::mt19937 rng(20240813);
    int agreed = 0, tried = 0;
    while (agreed < 100 && tried < 50000) {
      ++tried;
      const LowDefectPair p = random_pair(rng, oracle, 3);
      if (!delta_pair(p).less_than_int(p.poly.degree() + 1)) continue;
      const Substantiality s = is_substantial(p, scanner, Policy::kAssume);
      const auto [sc, cert] = scanner.stable_complexity(
          p.poly.leading_coefficient().get_ui(), Policy::kAssume);
      const bool definitional =
          p.base_complexity == static_cast<long long>(sc) + p.poly.degree();
      if (!(s.substantial && s.via_shortcut && definitional)) break;
      ++agreed;
    }
    c.check(agreed == 100,
            "shortcut agrees with the definitional check on 100 random "
            "small-defect pairs");
    results.push_back(std::move(c));
  }

  // ---- Criterion 9: covering verification -----------------------------------
  {
    Criterion c{9};
    const ExactDefect s2 = defect_of(2, table);
    const std::vector<LowDefectPair> both{make_pair("2", 2, oracle),
                                          make_pair("3", 3, oracle)};
    const CoveringReport ok = verify_covering(both, s2, 10000, table);
    c.check(ok.pass, "{(2,2), (3,3)} covers the leaders below delta(2)");

    const std::vector<LowDefectPair> no2{make_pair("3", 3, oracle)};
    const CoveringReport miss2 = verify_covering(no2, s2, 10000, table);
    c.check(!miss2.pass &&
                miss2.uncovered_leaders == std::vector<std::uint64_t>{2},
            "dropping (2,2) uncovers exactly the leader 2");

    const std::vector<LowDefectPair> no3{make_pair("2", 2, oracle)};
    const CoveringReport miss3 = verify_covering(no3, s2, 10000, table);
    c.check(!miss3.pass &&
                miss3.uncovered_leaders == std::vector<std::uint64_t>{3},
            "dropping (3,3) uncovers exactly the leader 3");
    results.push_back(std::move(c));
  }

  // ---- Criterion 10: convergence series -------------------------------------
  {
    Criterion c{10};
    const ConvergenceReport r = convergence_series(
        2, 1, 8, scanner, Policy::kStrict, SeriesMode::kPlain);
    c.check(r.strictly_increasing,
            "delta(2*3^k + 1) strictly increasing for k <= 8");
    c.check(r.target == ExactDefect(3, 2) && r.bounded_by_target,
            "every term strictly below delta(2) + 1 (exact signs)");
    c.check(!r.terms.empty() && r.terms.back().gap_sign == -1,
            "final gap sign is negative");
    bool classes = true;
    for (const SeriesTerm& term : r.terms) {
      if (term.exceptional) continue;
      classes = classes && term.defect.congruence_class() ==
                               static_cast<int>((table[2] + 1) % 3);
    }
    c.check(classes, "non-exceptional terms lie in class ||2||+1 mod 3");
    results.push_back(std::move(c));
  }

  // ---- report ---------------------------------------------------------------
  int failures = 0;
  for (const Criterion& c : results) {
    std::printf("criterion %2d: %s\n", c.id, c.pass ? "PASS" : "FAIL");
    for (const std::string& note : c.notes) {
      std::printf("    %s\n", note.c_str());
    }
    if (!c.pass) ++failures;
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, results.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", results.size());
  return 0;
}
