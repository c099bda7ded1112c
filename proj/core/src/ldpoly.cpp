#include "intcpx/ldpoly.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <numeric>
#include <stdexcept>

namespace intcpx {

unsigned complexity_of(const mpz_class& c, const ComplexityOracle& oracle) {
  if (c <= 0) {
    throw std::invalid_argument("complexity_of: constant must be positive");
  }
  if (!c.fits_ulong_p()) {
    throw resource_error("complexity_of: constant exceeds the value cap 2^42");
  }
  return oracle(c.get_ui());
}

// ---------------------------------------------------------------------------
// LowDefectPoly

LowDefectPoly LowDefectPoly::constant(mpz_class c) {
  if (c < 1) {
    throw std::invalid_argument("low-defect constant must be >= 1");
  }
  LowDefectPoly f;
  f.coef_[0] = std::move(c);
  return f;
}

mpz_class LowDefectPoly::coefficient(std::uint32_t mask) const {
  auto it = coef_.find(mask);
  return it == coef_.end() ? mpz_class(0) : it->second;
}

const mpz_class& LowDefectPoly::leading_coefficient() const {
  const std::uint32_t full = degree_ == 0 ? 0u : ((1u << degree_) - 1);
  return coef_.at(full);
}

mpz_class LowDefectPoly::constant_term() const {
  if (augmented_) return 0;
  return coefficient(0);
}

LowDefectPoly LowDefectPoly::tensor(const LowDefectPoly& rhs) const {
  if (augmented_ || rhs.augmented_) {
    throw std::invalid_argument("tensor: operands must not be augmented");
  }
  if (degree_ + rhs.degree_ > kMaxDegree) {
    throw std::invalid_argument("tensor: degree cap exceeded");
  }
  LowDefectPoly out;
  out.degree_ = degree_ + rhs.degree_;
  for (const auto& [m1, c1] : coef_) {
    for (const auto& [m2, c2] : rhs.coef_) {
      out.coef_[m1 | (m2 << degree_)] = c1 * c2;
    }
  }
  return out;
}

LowDefectPoly LowDefectPoly::extend_with(const mpz_class& c) const {
  if (augmented_) {
    throw std::invalid_argument("extend: polynomial must not be augmented");
  }
  if (c < 1) throw std::invalid_argument("extend: constant must be >= 1");
  if (degree_ + 1 > kMaxDegree) {
    throw std::invalid_argument("extend: degree cap exceeded");
  }
  LowDefectPoly out;
  out.degree_ = degree_ + 1;
  const std::uint32_t bit = 1u << degree_;
  for (const auto& [m, v] : coef_) out.coef_[m | bit] = v;
  out.coef_[0] = c;
  return out;
}

LowDefectPoly LowDefectPoly::augment() const {
  if (augmented_) {
    throw std::invalid_argument("augment: polynomial already augmented");
  }
  LowDefectPoly out = *this;
  out.augmented_ = true;
  return out;
}

mpz_class LowDefectPoly::evaluate(std::span<const unsigned> exponents) const {
  if (exponents.size() != static_cast<std::size_t>(arity())) {
    throw std::invalid_argument("evaluate: exponent tuple arity mismatch");
  }
  for (unsigned e : exponents) {
    if (e > kMaxExponent) {
      throw resource_error("evaluate: exponent exceeds the per-variable cap");
    }
  }
  mpz_class sum = 0;
  mpz_class term;
  for (const auto& [mask, coeff] : coef_) {
    unsigned long e = 0;
    for (int i = 0; i < degree_; ++i) {
      if (mask & (1u << i)) e += exponents[i];
    }
    mpz_ui_pow_ui(term.get_mpz_t(), 3, e);
    term *= coeff;
    sum += term;
  }
  if (augmented_) {
    mpz_ui_pow_ui(term.get_mpz_t(), 3, exponents[degree_]);
    sum *= term;
  }
  return sum;
}

mpz_class LowDefectPoly::min_completion(std::span<const unsigned> prefix) const {
  if (prefix.size() > static_cast<std::size_t>(arity())) {
    throw std::invalid_argument("min_completion: prefix longer than arity");
  }
  std::vector<unsigned> exps(prefix.begin(), prefix.end());
  exps.resize(arity(), 0);
  return evaluate(exps);
}

std::string LowDefectPoly::str() const {
  std::vector<std::uint32_t> masks;
  masks.reserve(coef_.size());
  for (const auto& [m, v] : coef_) masks.push_back(m);
  std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb) return pa > pb;
    return a < b;
  });

  std::string out;
  for (std::uint32_t m : masks) {
    const mpz_class& c = coef_.at(m);
    if (!out.empty()) out += " + ";
    if (m == 0) {
      out += c.get_str();
      continue;
    }
    std::string mono;
    for (int i = 0; i < degree_; ++i) {
      if (!(m & (1u << i))) continue;
      if (!mono.empty()) mono += "*";
      mono += "x" + std::to_string(i + 1);
    }
    out += (c == 1) ? mono : c.get_str() + "*" + mono;
  }
  if (out.empty()) out = "0";
  if (augmented_) {
    out = "(" + out + ")*x" + std::to_string(degree_ + 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pairs

LowDefectPair constant_pair(const mpz_class& c, long long base_complexity,
                            const ComplexityOracle& oracle) {
  if (base_complexity < complexity_of(c, oracle)) {
    throw std::invalid_argument("constant pair: base complexity below ||c||");
  }
  return {LowDefectPoly::constant(c), base_complexity};
}

LowDefectPair tensor(const LowDefectPair& p1, const LowDefectPair& p2) {
  return {p1.poly.tensor(p2.poly), p1.base_complexity + p2.base_complexity};
}

LowDefectPair extend(const LowDefectPair& p, const mpz_class& c, long long d,
                     const ComplexityOracle& oracle) {
  if (d < complexity_of(c, oracle)) {
    throw std::invalid_argument("extend: D must be at least ||c||");
  }
  return {p.poly.extend_with(c), p.base_complexity + d};
}

LowDefectPoly augment(const LowDefectPoly& f) { return f.augment(); }

ExactDefect delta_pair(const LowDefectPair& p) {
  return ExactDefect(p.base_complexity, p.poly.leading_coefficient());
}

ExactDefect delta_at(const LowDefectPair& p, std::span<const unsigned> exps) {
  if (p.poly.augmented()) {
    throw std::invalid_argument("delta_at: pair polynomial must be plain");
  }
  long long total = p.base_complexity;
  for (unsigned e : exps) total += 3ll * e;
  return ExactDefect(total, p.poly.evaluate(exps));
}

// ---------------------------------------------------------------------------
// Trees

namespace {

int tree_degree(const LowDefectTree::Node& n) {
  int d = static_cast<int>(n.children.size());
  for (const auto& e : n.children) d += tree_degree(e.child);
  return d;
}

mpz_class label_product(const LowDefectTree::Node& n) {
  mpz_class p = static_cast<unsigned long>(n.label);
  for (const auto& e : n.children) p *= label_product(e.child);
  return p;
}

LowDefectPoly node_poly(const LowDefectTree::Node& n) {
  LowDefectPoly f =
      LowDefectPoly::constant(mpz_class(static_cast<unsigned long>(n.label)));
  for (const auto& e : n.children) {
    f = f.tensor(node_poly(e.child).extend_with(
        mpz_class(static_cast<unsigned long>(e.label))));
  }
  return f;
}

unsigned node_complexity(const LowDefectTree::Node& n,
                         const ComplexityOracle& oracle) {
  if (n.children.empty()) return oracle(n.label);
  unsigned total = n.label > 1 ? oracle(n.label) : 0;
  for (const auto& e : n.children) {
    total += oracle(e.label) + node_complexity(e.child, oracle);
  }
  return total;
}

void validate_node(const LowDefectTree::Node& n) {
  if (n.label < 1) throw std::invalid_argument("tree vertex label must be >= 1");
  for (const auto& e : n.children) {
    if (e.label < 1) throw std::invalid_argument("tree edge label must be >= 1");
    validate_node(e.child);
  }
}

nlohmann::json node_json(const LowDefectTree::Node& n) {
  nlohmann::json kids = nlohmann::json::array();
  for (const auto& e : n.children) {
    nlohmann::json k = node_json(e.child);
    k["edge_label"] = e.label;
    kids.push_back(std::move(k));
  }
  return nlohmann::json{{"label", n.label}, {"children", std::move(kids)}};
}

LowDefectTree::Node node_from_json(const nlohmann::json& j) {
  LowDefectTree::Node n;
  n.label = j.at("label").get<std::uint64_t>();
  for (const auto& k : j.value("children", nlohmann::json::array())) {
    LowDefectTree::Edge e;
    e.label = k.at("edge_label").get<std::uint64_t>();
    e.child = node_from_json(k);
    n.children.push_back(std::move(e));
  }
  return n;
}

}  // namespace

int LowDefectTree::degree() const { return tree_degree(root); }

mpz_class LowDefectTree::leading_coefficient() const {
  return label_product(root);
}

LowDefectPoly LowDefectTree::to_poly() const { return node_poly(root); }

unsigned LowDefectTree::complexity(const ComplexityOracle& oracle) const {
  return node_complexity(root, oracle);
}

nlohmann::json LowDefectTree::to_json() const { return node_json(root); }

LowDefectTree LowDefectTree::from_json(const nlohmann::json& j) {
  LowDefectTree t;
  t.root = node_from_json(j);
  validate_node(t.root);
  return t;
}

// ---------------------------------------------------------------------------
// Expressions

struct LowDefectExpression::Node {
  enum class Kind { kConst, kProduct, kExtend };
  Kind kind;
  mpz_class c;  // constant value, or the extend addend
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
  int degree;
};

LowDefectExpression LowDefectExpression::constant(mpz_class c) {
  if (c < 1) throw std::invalid_argument("low-defect constant must be >= 1");
  return LowDefectExpression(std::make_shared<const Node>(
      Node{Node::Kind::kConst, std::move(c), nullptr, nullptr, 0}));
}

LowDefectExpression LowDefectExpression::product(
    const LowDefectExpression& a, const LowDefectExpression& b) {
  return LowDefectExpression(std::make_shared<const Node>(
      Node{Node::Kind::kProduct, 0, a.node_, b.node_,
           a.node_->degree + b.node_->degree}));
}

LowDefectExpression LowDefectExpression::extend(
    const LowDefectExpression& base, mpz_class c) {
  if (c < 1) throw std::invalid_argument("extend constant must be >= 1");
  return LowDefectExpression(std::make_shared<const Node>(
      Node{Node::Kind::kExtend, std::move(c), base.node_, nullptr,
           base.node_->degree + 1}));
}

int LowDefectExpression::degree() const noexcept { return node_->degree; }

LowDefectPoly LowDefectExpression::to_poly() const {
  struct Rec {
    static LowDefectPoly run(const Node& n) {
      switch (n.kind) {
        case Node::Kind::kConst:
          return LowDefectPoly::constant(n.c);
        case Node::Kind::kProduct:
          return run(*n.a).tensor(run(*n.b));
        case Node::Kind::kExtend:
          return run(*n.a).extend_with(n.c);
      }
      throw std::logic_error("unreachable");
    }
  };
  return Rec::run(*node_);
}

LowDefectTree LowDefectExpression::to_tree() const {
  struct Rec {
    static LowDefectTree::Node run(const Node& n) {
      switch (n.kind) {
        case Node::Kind::kConst: {
          if (!n.c.fits_ulong_p()) {
            throw resource_error("tree label exceeds 64 bits");
          }
          return LowDefectTree::Node{n.c.get_ui(), {}};
        }
        case Node::Kind::kExtend: {
          if (!n.c.fits_ulong_p()) {
            throw resource_error("tree edge label exceeds 64 bits");
          }
          LowDefectTree::Node root{1, {}};
          root.children.push_back({n.c.get_ui(), run(*n.a)});
          return root;
        }
        case Node::Kind::kProduct: {
          LowDefectTree::Node left = run(*n.a);
          LowDefectTree::Node right = run(*n.b);
          if (left.label > ~std::uint64_t{0} / right.label) {
            throw resource_error("tree root label overflows 64 bits");
          }
          // Merge the roots: labels multiply, child lists concatenate.
          LowDefectTree::Node merged{left.label * right.label,
                                     std::move(left.children)};
          for (auto& e : right.children) {
            merged.children.push_back(std::move(e));
          }
          return merged;
        }
      }
      throw std::logic_error("unreachable");
    }
  };
  return LowDefectTree{Rec::run(*node_)};
}

unsigned LowDefectExpression::base_complexity(
    const ComplexityOracle& oracle) const {
  struct Rec {
    static unsigned run(const Node& n, const ComplexityOracle& oracle) {
      switch (n.kind) {
        case Node::Kind::kConst:
          return complexity_of(n.c, oracle);
        case Node::Kind::kProduct:
          return run(*n.a, oracle) + run(*n.b, oracle);
        case Node::Kind::kExtend:
          return run(*n.a, oracle) + complexity_of(n.c, oracle);
      }
      throw std::logic_error("unreachable");
    }
  };
  return Rec::run(*node_, oracle);
}

std::string LowDefectExpression::str() const {
  struct Rec {
    static std::string run(const Node& n, int offset) {
      switch (n.kind) {
        case Node::Kind::kConst:
          return n.c.get_str();
        case Node::Kind::kProduct:
          return factor(*n.a, offset) + "*" +
                 factor(*n.b, offset + n.a->degree);
        case Node::Kind::kExtend:
          return factor(*n.a, offset) + "*x" +
                 std::to_string(offset + n.a->degree + 1) + "+" +
                 n.c.get_str();
      }
      throw std::logic_error("unreachable");
    }
    static std::string factor(const Node& n, int offset) {
      const std::string s = run(n, offset);
      return n.kind == Node::Kind::kExtend ? "(" + s + ")" : s;
    }
  };
  return Rec::run(*node_, 0);
}

// --------------------------- text parser -----------------------------------

namespace {

struct PNode {
  enum class Kind { kNum, kVar, kAdd, kMul };
  Kind kind;
  mpz_class num;
  int var = 0;
  std::vector<PNode> kids;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  struct Token {
    enum class Kind { kNum, kVar, kPlus, kStar, kLParen, kRParen, kEnd };
    Kind kind;
    mpz_class num;
    int var = 0;
  };

  Token next() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (pos_ >= text_.size()) return {Token::Kind::kEnd, 0, 0};
    const char ch = text_[pos_];
    if (ch == '+') { ++pos_; return {Token::Kind::kPlus, 0, 0}; }
    if (ch == '*') { ++pos_; return {Token::Kind::kStar, 0, 0}; }
    if (ch == '(') { ++pos_; return {Token::Kind::kLParen, 0, 0}; }
    if (ch == ')') { ++pos_; return {Token::Kind::kRParen, 0, 0}; }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string digits;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits.push_back(text_[pos_++]);
      }
      return {Token::Kind::kNum, mpz_class(digits), 0};
    }
    if (ch == 'x') {
      ++pos_;
      std::string digits;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits.push_back(text_[pos_++]);
      }
      if (digits.empty()) {
        throw std::invalid_argument(
            "expression parse: variable needs an index");
      }
      return {Token::Kind::kVar, 0, std::stoi(digits)};
    }
    throw std::invalid_argument(std::string("expression parse: unexpected '") +
                                ch + "'");
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { advance(); }

  PNode parse() {
    PNode e = expr();
    if (tok_.kind != Lexer::Token::Kind::kEnd) {
      throw std::invalid_argument("expression parse: trailing input");
    }
    return e;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  PNode expr() {
    PNode out{PNode::Kind::kAdd, 0, 0, {}};
    out.kids.push_back(term());
    while (tok_.kind == Lexer::Token::Kind::kPlus) {
      advance();
      out.kids.push_back(term());
    }
    if (out.kids.size() == 1) return std::move(out.kids.front());
    return out;
  }

  PNode term() {
    PNode out{PNode::Kind::kMul, 0, 0, {}};
    out.kids.push_back(factor());
    while (tok_.kind == Lexer::Token::Kind::kStar) {
      advance();
      out.kids.push_back(factor());
    }
    if (out.kids.size() == 1) return std::move(out.kids.front());
    return out;
  }

  PNode factor() {
    switch (tok_.kind) {
      case Lexer::Token::Kind::kNum: {
        PNode n{PNode::Kind::kNum, tok_.num, 0, {}};
        advance();
        return n;
      }
      case Lexer::Token::Kind::kVar: {
        PNode n{PNode::Kind::kVar, 0, tok_.var, {}};
        advance();
        return n;
      }
      case Lexer::Token::Kind::kLParen: {
        advance();
        PNode n = expr();
        if (tok_.kind != Lexer::Token::Kind::kRParen) {
          throw std::invalid_argument("expression parse: missing ')'");
        }
        advance();
        return n;
      }
      default:
        throw std::invalid_argument("expression parse: unexpected token");
    }
  }

  Lexer lexer_;
  Lexer::Token tok_{Lexer::Token::Kind::kEnd, 0, 0};
};

// Converts the generic AST into a low-defect expression, allocating
// positional variables and checking the written indices against them.
LowDefectExpression convert(const PNode& n, int& next_var);

LowDefectExpression convert_product(const std::vector<const PNode*>& factors,
                                    int& next_var) {
  if (factors.empty()) return LowDefectExpression::constant(1);
  LowDefectExpression out = convert(*factors[0], next_var);
  for (std::size_t i = 1; i < factors.size(); ++i) {
    out = LowDefectExpression::product(out, convert(*factors[i], next_var));
  }
  return out;
}

LowDefectExpression convert_add(const PNode& n, int& next_var) {
  if (n.kids.size() != 2) {
    throw std::invalid_argument(
        "expression parse: a sum must be of the form E*x + c");
  }
  const PNode* num = nullptr;
  const PNode* rest = nullptr;
  for (const PNode& k : n.kids) {
    if (k.kind == PNode::Kind::kNum && num == nullptr) {
      num = &k;
    } else {
      rest = &k;
    }
  }
  if (num == nullptr || rest == nullptr) {
    throw std::invalid_argument(
        "expression parse: a sum needs exactly one integer addend");
  }

  // The other addend must be a product with exactly one variable factor.
  std::vector<const PNode*> factors;
  const PNode* var = nullptr;
  auto take = [&](const PNode& f) {
    if (f.kind == PNode::Kind::kVar) {
      if (var != nullptr) {
        throw std::invalid_argument(
            "expression parse: each variable may occur once per extension");
      }
      var = &f;
    } else {
      factors.push_back(&f);
    }
  };
  if (rest->kind == PNode::Kind::kMul) {
    for (const PNode& f : rest->kids) take(f);
  } else {
    take(*rest);
  }
  if (var == nullptr) {
    throw std::invalid_argument(
        "expression parse: a sum must be of the form E*x + c");
  }

  LowDefectExpression base = convert_product(factors, next_var);
  ++next_var;
  if (var->var != next_var) {
    throw std::invalid_argument(
        "expression parse: variable x" + std::to_string(var->var) +
        " out of construction order (expected x" + std::to_string(next_var) +
        ")");
  }
  return LowDefectExpression::extend(base, num->num);
}

LowDefectExpression convert(const PNode& n, int& next_var) {
  switch (n.kind) {
    case PNode::Kind::kNum:
      return LowDefectExpression::constant(n.num);
    case PNode::Kind::kVar:
      throw std::invalid_argument(
          "expression parse: a bare variable is not a low-defect expression");
    case PNode::Kind::kAdd:
      return convert_add(n, next_var);
    case PNode::Kind::kMul: {
      std::vector<const PNode*> factors;
      for (const PNode& k : n.kids) {
        if (k.kind == PNode::Kind::kVar) {
          throw std::invalid_argument(
              "expression parse: a variable product needs an additive "
              "constant (E*x + c)");
        }
        factors.push_back(&k);
      }
      return convert_product(factors, next_var);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

LowDefectExpression LowDefectExpression::parse(std::string_view text) {
  Parser parser(text);
  const PNode ast = parser.parse();
  int next_var = 0;
  return convert(ast, next_var);
}

LowDefectPoly expr_to_poly(const LowDefectExpression& e) { return e.to_poly(); }
LowDefectTree expr_to_tree(const LowDefectExpression& e) { return e.to_tree(); }
LowDefectPoly tree_to_poly(const LowDefectTree& t) { return t.to_poly(); }
unsigned tree_complexity(const LowDefectTree& t, const ComplexityOracle& o) {
  return t.complexity(o);
}

LowDefectPair make_pair(const std::string& expression, long long C,
                        const ComplexityOracle& oracle) {
  const LowDefectPoly f = LowDefectExpression::parse(expression).to_poly();
  const long long floor =
      complexity_of(f.leading_coefficient(), oracle) + f.degree();
  if (C < floor) {
    throw std::invalid_argument("pair: base complexity " + std::to_string(C) +
                                " is below ||a|| + deg f = " +
                                std::to_string(floor));
  }
  return {f, C};
}

// ---------------------------------------------------------------------------
// Substantiality

Substantiality is_substantial(const LowDefectPair& p,
                              const StabilityScanner& scanner, Policy policy) {
  if (p.poly.augmented()) {
    throw std::invalid_argument("is_substantial: pair must be plain");
  }
  const mpz_class& a = p.poly.leading_coefficient();
  if (delta_pair(p).less_than_int(p.poly.degree() + 1)) {
    return {true, CertLevel::kCertified, true};
  }
  if (!a.fits_ulong_p()) {
    throw resource_error("is_substantial: leading coefficient exceeds cap");
  }
  auto [sc, cert] = scanner.stable_complexity(a.get_ui(), policy);
  return {p.base_complexity == static_cast<long long>(sc) + p.poly.degree(),
          cert, false};
}

InsubstantialityGap insubstantiality_gap(const LowDefectPair& p,
                                         const StabilityScanner& scanner,
                                         Policy policy) {
  if (p.poly.augmented()) {
    throw std::invalid_argument("insubstantiality_gap: pair must be plain");
  }
  const mpz_class& a = p.poly.leading_coefficient();
  if (delta_pair(p).less_than_int(p.poly.degree() + 1)) {
    return {p.poly.degree(), 0, CertLevel::kCertified};
  }
  if (!a.fits_ulong_p()) {
    throw resource_error(
        "insubstantiality_gap: leading coefficient exceeds cap");
  }
  auto [sc, cert] = scanner.stable_complexity(a.get_ui(), policy);
  const long long k = p.base_complexity - static_cast<long long>(sc);
  return {k, k - p.poly.degree(), cert};
}

bool substantial_by_tree(const LowDefectTree& t,
                         const StabilityScanner& scanner, Policy policy) {
  struct Walk {
    bool edges_ok = true;
    bool leaves_ok = true;
    unsigned label_sum = 0;
    void run(const LowDefectTree::Node& n, const ComplexityOracle& oracle) {
      if (n.children.empty() && n.label == 1) leaves_ok = false;
      if (n.label > 1) label_sum += oracle(n.label);
      for (const auto& e : n.children) {
        if (e.label != 1) edges_ok = false;
        run(e.child, oracle);
      }
    }
  };
  Walk w;
  w.run(t.root, scanner.oracle());
  if (!w.edges_ok || !w.leaves_ok) return false;

  const mpz_class big = t.leading_coefficient();
  if (!big.fits_ulong_p()) {
    throw resource_error("substantial_by_tree: label product exceeds cap");
  }
  const std::uint64_t product = big.get_ui();
  if (scanner.oracle()(product) != w.label_sum) return false;
  return scanner.is_stable(product, policy);
}

LowDefectPair canonical_substantial(std::uint64_t q, unsigned k,
                                    const StabilityScanner& scanner,
                                    Policy policy) {
  if (!scanner.is_stable(q, policy)) {
    throw std::invalid_argument(
        "canonical substantial pair requires a stable leading coefficient");
  }
  const ComplexityOracle& oracle = scanner.oracle();
  LowDefectPair p = constant_pair(mpz_class(static_cast<unsigned long>(q)),
                                  oracle(q), oracle);
  for (unsigned i = 0; i < k; ++i) p = extend(p, 1, 1, oracle);
  return p;
}

Degree1Classification degree1_form(const LowDefectPoly& f) {
  if (f.augmented() || f.degree() != 1) {
    throw std::invalid_argument("degree1_form: polynomial must have degree 1");
  }
  const mpz_class alpha = f.coefficient(1);
  const mpz_class beta = f.constant_term();
  if (beta == 1) return {Degree1Form::kAxPlus1, alpha, 1};
  if (alpha % beta == 0) {
    return {Degree1Form::kBAxPlus1, alpha / beta, beta};
  }
  return {Degree1Form::kOther, 0, 0};
}

// ------------------- exact ||f|| for degree <= 2 ----------------------------

namespace {

std::uint64_t to_u64(const mpz_class& v, const char* what) {
  if (!v.fits_ulong_p()) {
    throw resource_error(std::string(what) + " exceeds 64 bits");
  }
  return v.get_ui();
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    if (d != n / d) out.push_back(n / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

unsigned root_cost(std::uint64_t label, const ComplexityOracle& oracle) {
  return label > 1 ? oracle(label) : 0;
}

}  // namespace

unsigned absolute_base_complexity(const LowDefectPoly& f,
                                  const ComplexityOracle& oracle) {
  if (f.augmented()) {
    throw std::invalid_argument(
        "absolute base complexity: plain polynomials only");
  }
  if (f.degree() == 0) {
    return complexity_of(f.constant_term(), oracle);
  }
  constexpr unsigned kNone = ~0u;
  unsigned best = kNone;

  if (f.degree() == 1) {
    // Two-vertex trees r --c--> a give r(ax + c) = (ra) x + (rc).
    const std::uint64_t alpha = to_u64(f.coefficient(1), "coefficient");
    const std::uint64_t beta = to_u64(f.constant_term(), "coefficient");
    for (std::uint64_t r : divisors(std::gcd(alpha, beta))) {
      const unsigned cost =
          root_cost(r, oracle) + oracle(alpha / r) + oracle(beta / r);
      best = std::min(best, cost);
    }
    return best;
  }

  if (f.degree() != 2) {
    throw std::invalid_argument(
        "absolute base complexity: implemented for degree <= 2 only");
  }

  const std::uint64_t A = to_u64(f.coefficient(3), "coefficient");
  const std::uint64_t B = to_u64(f.coefficient(1), "coefficient");
  const std::uint64_t C = to_u64(f.coefficient(2), "coefficient");
  const std::uint64_t D = to_u64(f.constant_term(), "coefficient");

  // Star: r(a1 x1 + c1)(a2 x2 + c2); needs B, C > 0.
  if (B > 0 && C > 0) {
    for (std::uint64_t r :
         divisors(std::gcd(std::gcd(A, B), std::gcd(C, D)))) {
      const std::uint64_t a = A / r, b = B / r, c = C / r, d = D / r;
      for (std::uint64_t a1 : divisors(std::gcd(a, b))) {
        const std::uint64_t a2 = a / a1;
        const std::uint64_t c2 = b / a1;
        if (c % a2 != 0) continue;
        const std::uint64_t c1 = c / a2;
        if (c1 * c2 != d) continue;
        const unsigned cost = root_cost(r, oracle) + oracle(a1) + oracle(a2) +
                              oracle(c1) + oracle(c2);
        best = std::min(best, cost);
      }
    }
  }

  // Chain: r(m(a x_in + c1) x_out + c2); the inner variable appears in no
  // degree-1 monomial, so its lone coefficient must vanish.
  auto chain = [&](std::uint64_t inner_coeff, std::uint64_t outer_coeff) {
    if (inner_coeff != 0) return;
    for (std::uint64_t r :
         divisors(std::gcd(std::gcd(A, outer_coeff), D))) {
      const std::uint64_t c2 = D / r;
      for (std::uint64_t m : divisors(std::gcd(A / r, outer_coeff / r))) {
        const std::uint64_t a = A / r / m;
        const std::uint64_t c1 = outer_coeff / r / m;
        const unsigned cost = root_cost(r, oracle) + root_cost(m, oracle) +
                              oracle(a) + oracle(c1) + oracle(c2);
        best = std::min(best, cost);
      }
    }
  };
  chain(B, C);
  chain(C, B);

  if (best == kNone) {
    throw std::invalid_argument(
        "absolute base complexity: no tree shape matches the polynomial");
  }
  return best;
}

}  // namespace intcpx
