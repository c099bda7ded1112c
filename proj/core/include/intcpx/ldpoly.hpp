#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "intcpx/defect.hpp"
#include "intcpx/stability.hpp"

namespace intcpx {

/// ||c|| for a big-integer constant; the value must fit the oracle's range.
unsigned complexity_of(const mpz_class& c, const ComplexityOracle& oracle);

/// Read-once multilinear polynomial built from constants by product and
/// f*x+c steps.  Coefficients are non-negative, the constant term and the
/// full-monomial (leading) coefficient are positive.  An augmented
/// polynomial carries one extra multiplicative variable and a zero constant
/// term.  Variables are positional: x1..xd in construction order.
class LowDefectPoly {
 public:
  static constexpr int kMaxDegree = 24;
  /// Per-variable exponent bound for evaluation (keeps 3^e allocations sane).
  static constexpr unsigned kMaxExponent = 1u << 20;

  static LowDefectPoly constant(mpz_class c);

  int degree() const noexcept { return degree_; }
  bool augmented() const noexcept { return augmented_; }
  /// Number of exponents evaluate() expects.
  int arity() const noexcept { return degree_ + (augmented_ ? 1 : 0); }

  /// Coefficient of the monomial over the variable set encoded by mask
  /// (bit i <=> x_{i+1}); zero when absent.
  mpz_class coefficient(std::uint32_t mask) const;
  const std::map<std::uint32_t, mpz_class>& coefficients() const noexcept {
    return coef_;
  }
  const mpz_class& leading_coefficient() const;
  mpz_class constant_term() const;

  LowDefectPoly tensor(const LowDefectPoly& rhs) const;
  LowDefectPoly extend_with(const mpz_class& c) const;
  LowDefectPoly augment() const;

  /// f(3^{e1}, ..., 3^{ed}) (times 3^{e_{d+1}} when augmented).
  mpz_class evaluate(std::span<const unsigned> exponents) const;
  /// Value with the remaining exponents set to 0; increasing any exponent
  /// only increases the value, so this is the floor of every completion.
  mpz_class min_completion(std::span<const unsigned> prefix) const;

  std::string str() const;
  bool operator==(const LowDefectPoly&) const = default;

 private:
  LowDefectPoly() = default;
  int degree_ = 0;
  bool augmented_ = false;
  std::map<std::uint32_t, mpz_class> coef_;
};

/// A low-defect polynomial together with the base complexity C accumulated
/// by its construction.  Necessary condition: C >= ||a|| + deg f for the
/// leading coefficient a.
struct LowDefectPair {
  LowDefectPoly poly;
  long long base_complexity = 0;
};

LowDefectPair constant_pair(const mpz_class& c, long long base_complexity,
                            const ComplexityOracle& oracle);
LowDefectPair tensor(const LowDefectPair& p1, const LowDefectPair& p2);
/// (f (x) x + c, C + D); requires D >= ||c||.
LowDefectPair extend(const LowDefectPair& p, const mpz_class& c, long long d,
                     const ComplexityOracle& oracle);
LowDefectPoly augment(const LowDefectPoly& f);

/// delta(f, C) = C - 3 log3(leading coefficient).
ExactDefect delta_pair(const LowDefectPair& p);
/// delta_{f,C}(e) = C + 3*sum(e) - 3 log3 f(3^e); arity must match.
ExactDefect delta_at(const LowDefectPair& p, std::span<const unsigned> exps);

/// Rooted tree with positive integer labels on vertices and edges; the tree
/// form of a low-defect expression.  The polynomial of a vertex is its label
/// times, per child edge, (child polynomial * x + edge label).
struct LowDefectTree {
  struct Edge;
  struct Node {
    std::uint64_t label = 1;
    std::vector<Edge> children;
  };
  struct Edge {
    std::uint64_t label = 1;
    Node child;
  };

  Node root;

  int degree() const;  // edge count
  mpz_class leading_coefficient() const;  // product of all vertex labels
  LowDefectPoly to_poly() const;
  /// Sum of ||edge labels|| + ||leaf labels|| + ||non-leaf labels > 1||.
  unsigned complexity(const ComplexityOracle& oracle) const;

  /// {"label": L, "children": [{"edge_label": e, ...node}, ...]}
  nlohmann::json to_json() const;
  static LowDefectTree from_json(const nlohmann::json& j);
};

/// AST form: Constant(c), Product(E1, E2), Extend(E, c) = E*x+c with a
/// fresh positional variable.  Each variable occurs exactly once.
class LowDefectExpression {
 public:
  static LowDefectExpression constant(mpz_class c);
  static LowDefectExpression product(const LowDefectExpression& a,
                                     const LowDefectExpression& b);
  static LowDefectExpression extend(const LowDefectExpression& base,
                                    mpz_class c);

  int degree() const noexcept;
  LowDefectPoly to_poly() const;
  LowDefectTree to_tree() const;
  /// Sum of ||c|| over the integer constants in the expression.
  unsigned base_complexity(const ComplexityOracle& oracle) const;
  std::string str() const;

  /// Text syntax: integers, '*', '+', variables x1..xd, parentheses, e.g.
  /// "2*(1094*x1+1)".  Variable indices must follow construction order and
  /// each variable must occur exactly once.
  static LowDefectExpression parse(std::string_view text);

 private:
  struct Node;
  explicit LowDefectExpression(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

LowDefectPoly expr_to_poly(const LowDefectExpression& e);
LowDefectTree expr_to_tree(const LowDefectExpression& e);
LowDefectPoly tree_to_poly(const LowDefectTree& t);
unsigned tree_complexity(const LowDefectTree& t, const ComplexityOracle& o);

/// Parses a covering-file entry {expression, C} into a pair, enforcing the
/// necessary condition C >= ||a|| + deg f.
LowDefectPair make_pair(const std::string& expression, long long C,
                        const ComplexityOracle& oracle);

struct Substantiality {
  bool substantial = false;
  CertLevel certificate = CertLevel::kCertified;
  bool via_shortcut = false;  // delta(f,C) < deg f + 1 decided it
};

/// C = ||a||_st + deg f?  Uses the small-defect shortcut when it applies;
/// otherwise consults stability under the given policy.
Substantiality is_substantial(const LowDefectPair& p,
                              const StabilityScanner& scanner, Policy policy);

/// Writing delta(f,C) = delta_st(q) + k with q stable:
/// k = C - ||a||_st and gap = k - deg f; gap = 0 iff substantial.
struct InsubstantialityGap {
  long long k = 0;
  long long gap = 0;
  CertLevel certificate = CertLevel::kCertified;
};
InsubstantialityGap insubstantiality_gap(const LowDefectPair& p,
                                         const StabilityScanner& scanner,
                                         Policy policy);

/// The edge-label reading of substantiality: all edge labels 1, no leaf
/// label 1, the label product stable, and its complexity additive over the
/// labels > 1.
bool substantial_by_tree(const LowDefectTree& t,
                         const StabilityScanner& scanner, Policy policy);

/// (((q x1 + 1) x2 + 1) ... ) x_k + 1 with C = ||q|| + k; requires q stable
/// under the active policy.
LowDefectPair canonical_substantial(std::uint64_t q, unsigned k,
                                    const StabilityScanner& scanner,
                                    Policy policy);

enum class Degree1Form { kAxPlus1, kBAxPlus1, kOther };
struct Degree1Classification {
  Degree1Form form = Degree1Form::kOther;
  mpz_class a;
  mpz_class b;
};
/// Extracts (a, b) from a degree-1 polynomial of the shape b(ax+1).
Degree1Classification degree1_form(const LowDefectPoly& f);

/// Exact ||f||: the minimum base complexity over all constructions.
/// Implemented by enumerating tree shapes, degree <= 2 only (the shape
/// count grows too fast beyond that).
unsigned absolute_base_complexity(const LowDefectPoly& f,
                                  const ComplexityOracle& oracle);

}  // namespace intcpx
