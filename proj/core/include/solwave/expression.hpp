/// Tiny arithmetic-expression evaluator for shear profiles given as text,
/// e.g. "0.2*sin(1.5*y) - 0.1*y". Single free variable `y`, the usual
/// operators (+ - * / ^, unary minus) and a fixed function set.
#pragma once

#include <memory>
#include <string>

#include "solwave/numerics.hpp"

namespace solwave {

class Expression {
 public:
  Expression() = default;
  /// Parses `text`; throws Error with a position diagnostic on bad input.
  explicit Expression(const std::string& text);

  double operator()(double y) const;
  const std::string& text() const { return text_; }
  bool empty() const { return root_ == nullptr; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace solwave
