#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "intcpx/defect.hpp"
#include "support.hpp"

using namespace intcpx;
using testsupport::test_table;

TEST_CASE("canonical forms") {
  const ComplexityTable& t = test_table();
  const ExactDefect d1 = defect_of(1, t);
  CHECK(d1.ones() == 1);
  CHECK(d1.arg() == 1);
  CHECK(d1.is_integer());

  const ExactDefect d3 = defect_of(3, t);
  CHECK(d3.ones() == 0);
  CHECK(d3.arg() == 1);

  const ExactDefect d2 = defect_of(2, t);
  CHECK(d2.ones() == 2);
  CHECK(d2.arg() == 2);
  CHECK(d2.approx() == doctest::Approx(0.1072).epsilon(1e-3));

  // Canonicalization is idempotent: rebuilding from the canonical pair
  // changes nothing.
  const ExactDefect again(d2.ones(), d2.arg());
  CHECK(again == d2);

  // ||6|| = 5 (oracle-derived), so delta(6) canonicalizes to (2, 2).
  CHECK(defect_of(6, t) == d2);
}

TEST_CASE("exact comparison") {
  const ComplexityTable& t = test_table();
  CHECK(defect_of(3, t) < defect_of(2, t));
  CHECK(defect_of(2188, t) < defect_of(1, t));  // 3^21 < 2188^3
  CHECK(defect_of(2, t).compare(defect_of(6, t)) == std::strong_ordering::equal);
  CHECK(defect_of(2, t).compare(defect_of(2, t)) == std::strong_ordering::equal);

  // The comparison that decides delta(2188) < delta(1): 3^21 against 2188^3,
  // recomputed here independently.
  mpz_class p21;
  mpz_ui_pow_ui(p21.get_mpz_t(), 3, 21);
  const mpz_class cube = mpz_class(2188) * 2188 * 2188;
  CHECK(p21 < cube);
}

TEST_CASE("comparison is a total order on distinct values") {
  const ComplexityTable& t = test_table();
  std::vector<ExactDefect> ds;
  for (std::uint64_t n = 1; n <= 200; ++n) ds.push_back(defect_of(n, t));
  std::sort(ds.begin(), ds.end());
  for (std::size_t i = 0; i + 1 < ds.size(); ++i) {
    const auto c = ds[i].compare(ds[i + 1]);
    CHECK(c != std::strong_ordering::greater);
    if (c == std::strong_ordering::equal) {
      CHECK(ds[i] == ds[i + 1]);  // equal as reals iff identical canonical
    }
  }
}

TEST_CASE("integer thresholds") {
  const ComplexityTable& t = test_table();
  CHECK(defect_of(2188, t).less_than_int(1));
  CHECK_FALSE(defect_of(1, t).less_than_int(1));
  CHECK(defect_of(3, t).less_than_int(1));
  CHECK_FALSE(defect_of(3, t).less_than_int(0));
  CHECK(ExactDefect(-2, 1).less_than_int(0));
}

TEST_CASE("integer differences (congruence mod 1)") {
  const ComplexityTable& t = test_table();
  const auto diff = defect_of(1, t).integer_difference(defect_of(3, t));
  REQUIRE(diff.has_value());
  CHECK(*diff == 1);

  CHECK(defect_of(2, t).integer_difference(defect_of(2, t)) == 0);
  CHECK_FALSE(defect_of(2, t).integer_difference(defect_of(4, t)).has_value());
}

TEST_CASE("congruence classes") {
  const ComplexityTable& t = test_table();
  CHECK(defect_of(1, t).congruence_class() == 1);
  CHECK(defect_of(2, t).congruence_class() == 2);
  CHECK(defect_of(3, t).congruence_class() == 0);
  CHECK(ExactDefect(-1, 2).congruence_class() == 2);
}

TEST_CASE("equal defects have congruent ones-counts mod 3, n <= 10^4") {
  const ComplexityTable& t = test_table();
  // Group by canonical form; all members of a group must share ||n|| mod 3.
  std::map<std::pair<long long, std::uint64_t>, int> klass;
  for (std::uint64_t n = 1; n <= 10000; ++n) {
    const ExactDefect d = defect_of(n, t);
    const auto key = std::make_pair(d.ones(), d.arg().get_ui());
    const int c = t[n] % 3;
    auto [it, inserted] = klass.emplace(key, c);
    if (!inserted) {
      CAPTURE(n);
      CHECK(it->second == c);
    }
  }
}

TEST_CASE("the three class sets are disjoint as value sets, n <= 10^4") {
  const ComplexityTable& t = test_table();
  // A defect value appearing under two distinct classes would need two
  // canonical forms with equal value; compare a sorted sweep.
  std::vector<ExactDefect> all;
  for (std::uint64_t n = 2; n <= 10000; ++n) all.push_back(defect_of(n, t));
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    if (all[i].compare(all[i + 1]) == std::strong_ordering::equal) {
      CHECK(all[i].congruence_class() == all[i + 1].congruence_class());
    }
  }
}

TEST_CASE("defects are non-negative") {
  const ComplexityTable& t = test_table();
  for (std::uint64_t n = 1; n <= 5000; ++n) {
    if (defect_of(n, t).less_than_int(0)) {
      CAPTURE(n);
      CHECK_FALSE(defect_of(n, t).less_than_int(0));
    }
  }
}

TEST_CASE("json rendering marks the approximation") {
  const ComplexityTable& t = test_table();
  const nlohmann::json j = defect_of(2, t).to_json();
  CHECK(j["C"] == 2);
  CHECK(j["n"] == "2");
  CHECK(j["approx"].get<std::string>().substr(0, 6) == "0.1072");
}

TEST_CASE("argument must be positive") {
  CHECK_THROWS_AS(ExactDefect(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(ExactDefect(3, -9), std::invalid_argument);
}
