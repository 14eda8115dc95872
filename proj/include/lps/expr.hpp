#pragma once

#include <cctype>
#include <memory>
#include <optional>
#include <string>

#include "lps/moduli.hpp"

namespace lps {

// ---------------------------------------------------------------------------
// Minimal arithmetic expressions over the orbit-slice coordinates:
//   +, -, *, /, ^ with integer exponent, exp(...), variables x (= x1), x1..x9.
// Expressions that reduce to polynomials (divisions by constants only) are
// folded to Poly; exp(<polynomial>) at the top level becomes the positivity
// flag; anything else is sampled onto a grid model.
// ---------------------------------------------------------------------------

namespace expr {

struct Node;
using NodePtr = std::shared_ptr<Node>;

struct Node {
  enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Pow, Exp, Neg };
  Kind kind;
  double constant = 0.0;
  int var = 0;       // Variable
  int exponent = 0;  // Pow
  NodePtr a, b;

  double eval(const Vec& x) const {
    switch (kind) {
      case Kind::Constant: return constant;
      case Kind::Variable:
        if (var >= x.size()) throw DimensionMismatch("variable index in expression");
        return x[var];
      case Kind::Add: return a->eval(x) + b->eval(x);
      case Kind::Sub: return a->eval(x) - b->eval(x);
      case Kind::Mul: return a->eval(x) * b->eval(x);
      case Kind::Div: return a->eval(x) / b->eval(x);
      case Kind::Pow: {
        double base = a->eval(x), r = 1.0;
        for (int i = 0; i < exponent; ++i) r *= base;
        return r;
      }
      case Kind::Exp: return std::exp(a->eval(x));
      case Kind::Neg: return -a->eval(x);
    }
    return 0.0;
  }

  std::optional<Poly> to_poly(int nvars) const {
    switch (kind) {
      case Kind::Constant: return Poly::constant(nvars, constant);
      case Kind::Variable:
        if (var >= nvars) throw DimensionMismatch("variable index in expression");
        return Poly::variable(nvars, var);
      case Kind::Add:
      case Kind::Sub:
      case Kind::Mul: {
        auto pa = a->to_poly(nvars), pb = b->to_poly(nvars);
        if (!pa || !pb) return std::nullopt;
        if (kind == Kind::Add) return *pa + *pb;
        if (kind == Kind::Sub) return *pa - *pb;
        return *pa * *pb;
      }
      case Kind::Div: {
        auto pa = a->to_poly(nvars), pb = b->to_poly(nvars);
        if (!pa || !pb || pb->degree() > 0) return std::nullopt;
        double d = pb->eval(Vec::Zero(nvars));
        if (d == 0.0) throw ParseError("division by zero constant");
        return (1.0 / d) * *pa;
      }
      case Kind::Pow: {
        auto pa = a->to_poly(nvars);
        if (!pa) return std::nullopt;
        return pa->pow(exponent);
      }
      case Kind::Exp: return std::nullopt;
      case Kind::Neg: {
        auto pa = a->to_poly(nvars);
        if (!pa) return std::nullopt;
        return -1.0 * *pa;
      }
    }
    return std::nullopt;
  }
};

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    NodePtr n = sum();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("unexpected input at position " + std::to_string(pos_));
    return n;
  }

 private:
  static NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr sum() {
    NodePtr n = term();
    while (true) {
      if (accept('+'))
        n = make(Node::Kind::Add, n, term());
      else if (accept('-'))
        n = make(Node::Kind::Sub, n, term());
      else
        return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    while (true) {
      if (accept('*'))
        n = make(Node::Kind::Mul, n, unary());
      else if (accept('/'))
        n = make(Node::Kind::Div, n, unary());
      else
        return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Kind::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (!accept('^')) return base;
    skip_ws();
    bool neg = accept('-');
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == start || neg)
      throw ParseError("exponent must be a nonnegative integer");
    NodePtr n = make(Node::Kind::Pow, base);
    n->exponent = std::stoi(text_.substr(start, pos_ - start));
    return n;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = sum();
      if (!accept(')')) throw ParseError("missing ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = std::stod(text_.substr(pos_), &used);
      pos_ += used;
      NodePtr n = make(Node::Kind::Constant);
      n->constant = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isalnum(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      std::string name = text_.substr(start, pos_ - start);
      if (name == "exp") {
        if (!accept('(')) throw ParseError("exp requires parentheses");
        NodePtr n = make(Node::Kind::Exp, sum());
        if (!accept(')')) throw ParseError("missing ')'");
        return n;
      }
      if (name == "x") {
        NodePtr n = make(Node::Kind::Variable);
        n->var = 0;
        return n;
      }
      if (name.size() >= 2 && name[0] == 'x') {
        bool digits = true;
        for (std::size_t i = 1; i < name.size(); ++i)
          digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
        if (digits) {
          NodePtr n = make(Node::Kind::Variable);
          n->var = std::stoi(name.substr(1)) - 1;
          if (n->var < 0) throw ParseError("variables are numbered from x1");
          return n;
        }
      }
      throw ParseError("unknown identifier '" + name + "'");
    }
    throw ParseError(std::string("unexpected character '") + c + "'");
  }

  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace expr

// Parse an expression in the slice coordinates into a Casimir model with
// `nvars` variables. Polynomials (and exp(polynomial)) are represented
// exactly; other expressions are sampled onto a regular grid over the
// normalized slice cube [-1, 1]^nvars.
inline CasimirModel parse_casimir(const std::string& text, int nvars,
                                  int grid_resolution = 101) {
  expr::NodePtr root = expr::Parser(text).parse();

  if (root->kind == expr::Node::Kind::Exp) {
    if (auto inner = root->a->to_poly(nvars))
      return CasimirModel::polynomial(*inner, true);
  }
  if (auto p = root->to_poly(nvars)) return CasimirModel::polynomial(*p, false);

  if (nvars == 0)
    return CasimirModel::polynomial(Poly::constant(0, root->eval(Vec(0))), false);
  Vec lo = -Vec::Ones(nvars), hi = Vec::Ones(nvars);
  std::vector<int> res(nvars, grid_resolution);
  std::vector<double> values;
  std::function<void(int, Vec&)> fill = [&](int axis, Vec& x) {
    if (axis == nvars) {
      values.push_back(root->eval(x));
      return;
    }
    for (int i = 0; i < grid_resolution; ++i) {
      x[axis] = -1.0 + 2.0 * i / (grid_resolution - 1);
      fill(axis + 1, x);
    }
  };
  Vec x(nvars);
  fill(0, x);
  return CasimirModel::grid(lo, hi, res, values, false);
}

}  // namespace lps
