#include "translab/expr.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "translab/error.hpp"

namespace translab {

struct Expr::Node {
  enum class Kind { Num, VarX, VarY, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Log, Abs };
  Kind kind;
  double num = 0.0;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(double x, double y) const {
    switch (kind) {
      case Kind::Num: return num;
      case Kind::VarX: return x;
      case Kind::VarY: return y;
      case Kind::Add: return lhs->eval(x, y) + rhs->eval(x, y);
      case Kind::Sub: return lhs->eval(x, y) - rhs->eval(x, y);
      case Kind::Mul: return lhs->eval(x, y) * rhs->eval(x, y);
      case Kind::Div: return lhs->eval(x, y) / rhs->eval(x, y);
      case Kind::Pow: return std::pow(lhs->eval(x, y), rhs->eval(x, y));
      case Kind::Neg: return -lhs->eval(x, y);
      case Kind::Sin: return std::sin(lhs->eval(x, y));
      case Kind::Cos: return std::cos(lhs->eval(x, y));
      case Kind::Exp: return std::exp(lhs->eval(x, y));
      case Kind::Log: return std::log(lhs->eval(x, y));
      case Kind::Abs: return std::abs(lhs->eval(x, y));
    }
    return 0.0;
  }
};

double Expr::operator()(double x, double y) const { return root_->eval(x, y); }

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Node::Kind;

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_num(double v) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Kind::Num;
  n->num = v;
  return n;
}

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, what + " at offset " + std::to_string(pos));
  }

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (eat('+'))
        lhs = make(Kind::Add, lhs, parse_term());
      else if (eat('-'))
        lhs = make(Kind::Sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (eat('*'))
        lhs = make(Kind::Mul, lhs, parse_unary());
      else if (eat('/'))
        lhs = make(Kind::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    if (eat('-')) return make(Kind::Neg, parse_unary());
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (eat('^')) return make(Kind::Pow, base, parse_unary());  // right-associative
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of expression");
    const char c = text[pos];
    if (c == '(') {
      ++pos;
      NodePtr inner = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text.c_str() + pos;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos += static_cast<std::size_t>(end - begin);
      return make_num(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos;
      while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
      const std::string name = text.substr(start, pos - start);
      if (name == "x") return make(Kind::VarX);
      if (name == "y") return make(Kind::VarY);
      if (name == "pi") return make_num(M_PI);
      Kind kind;
      if (name == "sin")
        kind = Kind::Sin;
      else if (name == "cos")
        kind = Kind::Cos;
      else if (name == "exp")
        kind = Kind::Exp;
      else if (name == "log")
        kind = Kind::Log;
      else if (name == "abs")
        kind = Kind::Abs;
      else {
        pos = start;
        fail("unknown identifier '" + name + "'");
      }
      if (!eat('(')) fail("expected '(' after function name");
      NodePtr arg = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return make(kind, arg);
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

Expr parse_expression(const std::string& text) {
  Parser p{text};
  Expr e;
  e.root_ = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return e;
}

}  // namespace translab
