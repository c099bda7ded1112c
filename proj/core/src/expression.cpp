#include "intcpx/expression.hpp"

#include <limits>
#include <stdexcept>

namespace intcpx {

struct Expression::Node {
  enum class Kind { kOne, kAdd, kMul };
  Kind kind;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  unsigned ones;
  std::uint64_t value;
};

Expression Expression::one() {
  static const auto node = std::make_shared<const Node>(
      Node{Node::Kind::kOne, nullptr, nullptr, 1, 1});
  return Expression(node);
}

Expression Expression::add(const Expression& a, const Expression& b) {
  const std::uint64_t va = a.node_->value, vb = b.node_->value;
  if (va > std::numeric_limits<std::uint64_t>::max() - vb) {
    throw std::invalid_argument("expression add overflows");
  }
  return Expression(std::make_shared<const Node>(Node{
      Node::Kind::kAdd, a.node_, b.node_, a.node_->ones + b.node_->ones,
      va + vb}));
}

Expression Expression::mul(const Expression& a, const Expression& b) {
  const std::uint64_t va = a.node_->value, vb = b.node_->value;
  if (vb != 0 && va > std::numeric_limits<std::uint64_t>::max() / vb) {
    throw std::invalid_argument("expression mul overflows");
  }
  return Expression(std::make_shared<const Node>(Node{
      Node::Kind::kMul, a.node_, b.node_, a.node_->ones + b.node_->ones,
      va * vb}));
}

unsigned Expression::ones() const noexcept { return node_->ones; }
std::uint64_t Expression::value() const noexcept { return node_->value; }

void Expression::render_factor(const Node* n, std::string& out) {
  const bool needs_parens = n->kind == Node::Kind::kAdd;
  if (needs_parens) out.push_back('(');
  render(n, out);
  if (needs_parens) out.push_back(')');
}

void Expression::render(const Node* n, std::string& out) {
  switch (n->kind) {
    case Node::Kind::kOne:
      out.push_back('1');
      break;
    case Node::Kind::kAdd:
      render(n->lhs.get(), out);
      out.push_back('+');
      render(n->rhs.get(), out);
      break;
    case Node::Kind::kMul:
      render_factor(n->lhs.get(), out);
      render_factor(n->rhs.get(), out);
      break;
  }
}

std::string Expression::str() const {
  std::string out;
  render(node_.get(), out);
  return out;
}

unsigned expression_complexity(const Expression& e) { return e.ones(); }

namespace {

Expression reconstruct(std::uint64_t n, const ComplexityTable& table) {
  if (n == 1) return Expression::one();
  const auto& v = table.values();
  const unsigned target = v[n];
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    if (unsigned{v[d]} + v[n / d] == target) {
      return Expression::mul(reconstruct(d, table), reconstruct(n / d, table));
    }
  }
  for (std::uint64_t a = 1; a <= n - a; ++a) {
    if (unsigned{v[a]} + v[n - a] == target) {
      return Expression::add(reconstruct(a, table),
                             reconstruct(n - a, table));
    }
  }
  throw std::logic_error("best_expression: no split matches the table value");
}

}  // namespace

Expression best_expression(std::uint64_t n, const ComplexityTable& table) {
  if (n == 0 || n > table.limit()) {
    throw std::out_of_range("best_expression: n outside table range");
  }
  return reconstruct(n, table);
}

}  // namespace intcpx
