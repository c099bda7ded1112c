#include "intcpx/defect.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace intcpx {
namespace {

mpz_class pow3(unsigned long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 3, e);
  return p;
}

mpz_class cube(const mpz_class& x) { return x * x * x; }

}  // namespace

ExactDefect::ExactDefect(long long ones, mpz_class arg)
    : ones_(ones), arg_(std::move(arg)) {
  if (arg_ <= 0) {
    throw std::invalid_argument("exact defect: argument must be positive");
  }
  while (mpz_divisible_ui_p(arg_.get_mpz_t(), 3)) {
    mpz_divexact_ui(arg_.get_mpz_t(), arg_.get_mpz_t(), 3);
    ones_ -= 3;
  }
}

ExactDefect ExactDefect::of_value(std::uint64_t n,
                                  const ComplexityTable& table) {
  return ExactDefect(table[n], mpz_class(static_cast<unsigned long>(n)));
}

ExactDefect ExactDefect::of_value(std::uint64_t n,
                                  const ComplexityOracle& oracle) {
  return ExactDefect(oracle(n), mpz_class(static_cast<unsigned long>(n)));
}

std::strong_ordering ExactDefect::compare(const ExactDefect& other) const {
  if (arg_ == other.arg_) return ones_ <=> other.ones_;
  // v1 < v2  iff  3^(C1-C2) * n2^3 < n1^3.
  const long long e = ones_ - other.ones_;
  mpz_class lhs = cube(other.arg_);
  mpz_class rhs = cube(arg_);
  if (e >= 0) {
    lhs *= pow3(static_cast<unsigned long>(e));
  } else {
    rhs *= pow3(static_cast<unsigned long>(-e));
  }
  const int c = cmp(lhs, rhs);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  // Equal cubes with distinct canonical args cannot happen (unique
  // 3-adic valuation); equality is identity of canonical forms.
  return std::strong_ordering::equal;
}

bool ExactDefect::less_than_int(long long k) const {
  const long long e = ones_ - k;
  if (e < 0) return true;  // 3^e < 1 <= n^3
  return pow3(static_cast<unsigned long>(e)) < cube(arg_);
}

std::optional<long long> ExactDefect::integer_difference(
    const ExactDefect& other) const {
  if (arg_ != other.arg_) return std::nullopt;
  return ones_ - other.ones_;
}

double ExactDefect::approx() const {
  // log2 of the argument via mantissa/exponent split; display only.
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, arg_.get_mpz_t());
  const double log3_arg =
      (std::log2(mant) + static_cast<double>(exp2)) / std::log2(3.0);
  return static_cast<double>(ones_) - 3.0 * log3_arg;
}

std::string ExactDefect::approx_string() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", approx());
  return buf;
}

nlohmann::json ExactDefect::to_json() const {
  return nlohmann::json{{"C", ones_},
                        {"n", arg_.get_str()},
                        {"approx", approx_string()}};
}

}  // namespace intcpx
