#ifndef TRANSLAB_EXPR_HPP
#define TRANSLAB_EXPR_HPP

#include <memory>
#include <string>

namespace translab {

// Arithmetic expression over the variables x and y: numbers, + - * / ^
// (right-associative), parentheses, sin cos exp log abs, and the constant pi.
class Expr {
public:
  double operator()(double x, double y = 0.0) const;

  struct Node;

private:
  friend Expr parse_expression(const std::string& text);
  std::shared_ptr<const Node> root_;
};

// Throws Error(ParseError) naming the byte offset of the first bad token.
Expr parse_expression(const std::string& text);

}  // namespace translab

#endif
