#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "intcpx/represent.hpp"
#include "support.hpp"

using namespace intcpx;
using testsupport::test_oracle;
using testsupport::test_table;

namespace {

const StabilityScanner& scanner() {
  static const StabilityScanner s(test_oracle(), 12);
  return s;
}

LowDefectPair pair_of(const std::string& text, long long C) {
  return make_pair(text, C, test_oracle());
}

// Brute-force reference: every tuple with each exponent up to a box bound.
std::set<std::vector<unsigned>> brute_tuples(const LowDefectPoly& f,
                                             const mpz_class& N,
                                             unsigned bound) {
  std::set<std::vector<unsigned>> out;
  std::vector<unsigned> exps(f.degree(), 0);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == f.degree()) {
      if (f.evaluate(exps) == N) out.insert(exps);
      return;
    }
    for (unsigned e = 0; e <= bound; ++e) {
      exps[i] = e;
      self(self, i + 1);
    }
    exps[i] = 0;
  };
  rec(rec, 0);
  return out;
}

}  // namespace

TEST_CASE("representation search") {
  const LowDefectPoly f = LowDefectExpression::parse("2*x1+1").to_poly();
  const auto hits = find_representations(f, 7, false);
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].exponents == std::vector<unsigned>{1});
  CHECK_FALSE(hits[0].augmented_exponent.has_value());

  CHECK(find_representations(f, 8, false).empty());

  const LowDefectPoly g =
      LowDefectExpression::parse("(2*x1+1)*(3*x2+1)").to_poly();
  const auto hits70 = find_representations(g, 70, false);
  REQUIRE(hits70.size() == 1);
  CHECK(hits70[0].exponents == std::vector<unsigned>{1, 1});

  SUBCASE("augmented mode strips trailing powers of 3") {
    // 7 * 9 = 63: (2x+1) * 3^2 via x=1.
    const auto aug = find_representations(f, 63, true);
    REQUIRE(aug.size() == 1);
    CHECK(aug[0].exponents == std::vector<unsigned>{1});
    CHECK(aug[0].augmented_exponent == 2);
    CHECK(aug[0].exponent_sum() == 3);
  }
  SUBCASE("complete against brute force on small instances") {
    for (std::uint64_t n = 1; n <= 200; ++n) {
      const auto fast = find_representations(g, n, false);
      const auto slow = brute_tuples(g, n, 6);
      CAPTURE(n);
      CHECK(fast.size() == slow.size());
      for (const auto& w : fast) CHECK(slow.count(w.exponents) == 1);
    }
  }
}

TEST_CASE("efficiency of representations") {
  const auto two_x = pair_of("2*x1+1", 3);
  const auto r7 = is_efficiently_represented(two_x, 7, test_oracle(), false);
  CHECK(r7.efficient);  // ||7|| = 6 = 3 + 3
  REQUIRE(r7.witness.has_value());
  CHECK(r7.witness->efficient);
  CHECK(r7.witness->exponent_sum() == 1);

  const auto x_plus = pair_of("x1+1", 2);
  CHECK_FALSE(
      is_efficiently_represented(x_plus, 4, test_oracle(), false).efficient);

  const auto three = pair_of("3", 3);
  CHECK(is_efficiently_represented(three, 3, test_oracle(), false).efficient);
}

TEST_CASE("exceptional sets") {
  SUBCASE("2x+1 has no exceptions for k <= 10") {
    const auto p = pair_of("2*x1+1", 3);
    const unsigned box[1] = {10};
    const ExceptionalSet ex =
        exceptional_set(p, box, scanner(), Policy::kStrict,
                        ExceptionalMode::kPlain);
    CHECK(ex.tuples.empty());
    CHECK(ex.certificate == CertLevel::kCertified);
  }
  SUBCASE("x+1 is exceptional from k = 1 on") {
    const auto p = pair_of("x1+1", 2);
    const unsigned box[1] = {3};
    const ExceptionalSet ex = exceptional_set(
        p, box, scanner(), Policy::kStrict, ExceptionalMode::kPlain);
    const std::vector<std::vector<unsigned>> expect{{1}, {2}, {3}};
    CHECK(ex.tuples == expect);  // ||4||=4<5, ||10||=7<8, ||28||=10<11
  }
  SUBCASE("stable mode contains plain mode") {
    std::mt19937 rng(3);
    for (const char* text : {"x1+1", "2*x1+1", "4*x1+2", "2*(1094*x1+1)"}) {
      const LowDefectPoly f = LowDefectExpression::parse(text).to_poly();
      const LowDefectPair p{
          f, complexity_of(f.leading_coefficient(), test_oracle()) +
                 f.degree()};
      const unsigned box[1] = {4};
      const auto plain = exceptional_set(p, box, scanner(), Policy::kAssume,
                                         ExceptionalMode::kPlain);
      const auto stable = exceptional_set(p, box, scanner(), Policy::kAssume,
                                          ExceptionalMode::kStable);
      CAPTURE(text);
      for (const auto& t : plain.tuples) {
        CHECK(std::count(stable.tuples.begin(), stable.tuples.end(), t) == 1);
      }
    }
  }
  SUBCASE("stable mode under strict policy names the unresolved tuples") {
    // Whether () is exceptional for (23, 11) is exactly the open question
    // of whether 23 is stable.
    const auto p = pair_of("23", 11);
    CHECK_THROWS_WITH_AS(exceptional_set(p, {}, scanner(), Policy::kStrict,
                                         ExceptionalMode::kStable),
                         doctest::Contains("()"), indeterminate_error);
    const auto assumed =
        exceptional_set(p, {}, scanner(), Policy::kAssume,
                        ExceptionalMode::kStable);
    CHECK(assumed.tuples.empty());
    CHECK(assumed.certificate == CertLevel::kHorizonAssumed);
  }
}

TEST_CASE("minimal K scans at degree 1") {
  SUBCASE("2x+1") {
    const auto r = minimal_k_degree1(pair_of("2*x1+1", 3), 10, scanner(),
                                     Policy::kStrict, ExceptionalMode::kPlain);
    CHECK(r.k_observed == 0);
    CHECK(r.exceptional.empty());
  }
  SUBCASE("x+1 never clears") {
    const auto r = minimal_k_degree1(pair_of("x1+1", 2), 8, scanner(),
                                     Policy::kStrict, ExceptionalMode::kPlain);
    CHECK_FALSE(r.k_observed.has_value());
    CHECK(std::count(r.exceptional.begin(), r.exceptional.end(), 1) == 1);
    CHECK(r.exceptional.size() == 8);  // every k >= 1
  }
  SUBCASE("the off-by-two pair is exceptional at every k") {
    const auto r =
        minimal_k_degree1(pair_of("2*(1094*x1+1)", 25), 6, scanner(),
                          Policy::kStrict, ExceptionalMode::kPlain);
    CHECK_FALSE(r.k_observed.has_value());
    CHECK(r.exceptional.size() == 7);
  }
  SUBCASE("degree restriction") {
    CHECK_THROWS_AS(minimal_k_degree1(pair_of("3", 3), 4, scanner(),
                                      Policy::kStrict,
                                      ExceptionalMode::kPlain),
                    std::invalid_argument);
  }
}

TEST_CASE("leaders") {
  const ComplexityTable& t = test_table();
  CHECK(is_leader(2, t));
  CHECK_FALSE(is_leader(6, t));  // ||6|| = 5 = ||2|| + 3
  CHECK(leaders(10, t) ==
        std::vector<std::uint64_t>{1, 2, 3, 4, 5, 7, 8, 10});

  CHECK(leader_decompose(54, t) == std::pair<std::uint64_t, unsigned>{2, 3});
  CHECK(leader_decompose(2, t) == std::pair<std::uint64_t, unsigned>{2, 0});

  SUBCASE("decomposition preserves the defect exactly") {
    for (std::uint64_t n = 1; n <= 2000; ++n) {
      const auto [m, k] = leader_decompose(n, t);
      CAPTURE(n);
      CHECK(is_leader(m, t));
      CHECK(defect_of(n, t) == defect_of(m, t));
      CHECK(t[n] == t[m] + 3 * k);
    }
  }
}

TEST_CASE("covering verification") {
  const ComplexityTable& t = test_table();
  const ExactDefect s2 = defect_of(2, t);
  const std::vector<LowDefectPair> both{pair_of("2", 2), pair_of("3", 3)};

  SUBCASE("the two constant pairs cover everything below delta(2)") {
    const CoveringReport r = verify_covering(both, s2, 10000, t);
    CHECK(r.pass);
    CHECK(r.bound_violations.empty());
    CHECK(r.uncovered_leaders.empty());
  }
  SUBCASE("dropping the pair for 2 uncovers the leader 2") {
    const std::vector<LowDefectPair> only3{pair_of("3", 3)};
    const CoveringReport r = verify_covering(only3, s2, 10000, t);
    CHECK_FALSE(r.pass);
    CHECK(r.uncovered_leaders == std::vector<std::uint64_t>{2});
  }
  SUBCASE("dropping the pair for 3 uncovers the leader 3") {
    const std::vector<LowDefectPair> only2{pair_of("2", 2)};
    const CoveringReport r = verify_covering(only2, s2, 10000, t);
    CHECK_FALSE(r.pass);
    CHECK(r.uncovered_leaders == std::vector<std::uint64_t>{3});
  }
  SUBCASE("a bound of zero rejects the pair for 2") {
    const std::vector<LowDefectPair> only2{pair_of("2", 2)};
    const CoveringReport r = verify_covering(only2, ExactDefect(), 10000, t);
    CHECK_FALSE(r.pass);
    CHECK(r.bound_violations == std::vector<std::size_t>{0});
  }
}

TEST_CASE("efficient witnesses meet the naive bound with equality") {
  const ComplexityTable& t = test_table();
  const auto p = pair_of("2*x1+1", 3);
  for (unsigned k = 0; k <= 9; ++k) {
    std::uint64_t v = 2;
    for (unsigned i = 0; i < k; ++i) v *= 3;
    v += 1;
    const auto r = is_efficiently_represented(p, v, test_oracle(), false);
    CAPTURE(k);
    REQUIRE(r.efficient);
    CHECK(3 + 3ll * r.witness->exponent_sum() == t[v]);
  }
}

TEST_CASE("witness json") {
  const auto hits = find_representations(
      LowDefectExpression::parse("2*x1+1").to_poly(), 63, true);
  REQUIRE_FALSE(hits.empty());
  const nlohmann::json j = hits[0].to_json();
  CHECK(j["exponents"] == nlohmann::json::array({1}));
  CHECK(j["augmented_exponent"] == 2);
  CHECK(j["target"] == "63");
}
