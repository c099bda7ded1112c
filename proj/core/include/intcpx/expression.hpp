#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "intcpx/complexity.hpp"

namespace intcpx {

/// An expression over the constant 1, binary +, and binary multiplication.
/// Immutable; copies share structure.
class Expression {
 public:
  static Expression one();
  static Expression add(const Expression& a, const Expression& b);
  static Expression mul(const Expression& a, const Expression& b);

  /// Number of 1-leaves.
  unsigned ones() const noexcept;
  /// Arithmetic value of the tree.
  std::uint64_t value() const noexcept;
  /// Rendering in the usual style, e.g. "(1+1+1)(1+1+1)+1+1".
  std::string str() const;

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}
  static void render(const Node* n, std::string& out);
  static void render_factor(const Node* n, std::string& out);
  std::shared_ptr<const Node> node_;
};

/// ||E||: the ones-count of the expression.  Always >= ||value(E)||.
unsigned expression_complexity(const Expression& e);

/// A witness expression for n with exactly ||n|| ones.  Ties are broken
/// deterministically: the product split with the smallest divisor first,
/// then the sum split with the smallest summand.  Requires n <= table.limit.
Expression best_expression(std::uint64_t n, const ComplexityTable& table);

}  // namespace intcpx
