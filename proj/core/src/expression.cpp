#include "solwave/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <vector>

namespace solwave {

struct Expression::Node {
  enum class Op {
    Const,
    Var,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Call,
  };
  Op op = Op::Const;
  double value = 0.0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> lhs, rhs;

  double eval(double y) const {
    switch (op) {
      case Op::Const: return value;
      case Op::Var: return y;
      case Op::Add: return lhs->eval(y) + rhs->eval(y);
      case Op::Sub: return lhs->eval(y) - rhs->eval(y);
      case Op::Mul: return lhs->eval(y) * rhs->eval(y);
      case Op::Div: return lhs->eval(y) / rhs->eval(y);
      case Op::Pow: return std::pow(lhs->eval(y), rhs->eval(y));
      case Op::Neg: return -lhs->eval(y);
      case Op::Call: return fn(lhs->eval(y));
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make(Node::Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Const;
  n->value = v;
  return n;
}

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error("expression parse error at position " + std::to_string(pos) +
                ": " + what + " in \"" + s + "\"");
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos != s.size()) fail("trailing input");
    return e;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+'))
        lhs = make(Node::Op::Add, lhs, term());
      else if (eat('-'))
        lhs = make(Node::Op::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (eat('*'))
        lhs = make(Node::Op::Mul, lhs, unary());
      else if (eat('/'))
        lhs = make(Node::Op::Div, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Node::Op::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (eat('^')) return make(Node::Op::Pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input");
    const char c = s[pos];
    if (c == '(') {
      ++pos;
      NodePtr e = expr();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      const double v = std::strtod(s.c_str() + pos, &end);
      if (end == s.c_str() + pos) fail("bad number");
      pos = static_cast<std::size_t>(end - s.c_str());
      return make_const(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos;
      while (pos < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[pos])) ||
              s[pos] == '_'))
        ++pos;
      const std::string name = s.substr(start, pos - start);
      if (name == "y") return make(Node::Op::Var);
      if (name == "pi") return make_const(M_PI);
      if (name == "e") return make_const(M_E);
      static const struct {
        const char* name;
        double (*fn)(double);
      } kFunctions[] = {
          {"sin", std::sin},   {"cos", std::cos},   {"tan", std::tan},
          {"sinh", std::sinh}, {"cosh", std::cosh}, {"tanh", std::tanh},
          {"exp", std::exp},   {"log", std::log},   {"sqrt", std::sqrt},
          {"abs", std::fabs},
      };
      for (const auto& f : kFunctions) {
        if (name == f.name) {
          if (!eat('(')) fail("expected '(' after function name");
          NodePtr arg = expr();
          if (!eat(')')) fail("missing ')'");
          auto n = std::make_shared<Node>();
          n->op = Node::Op::Call;
          n->fn = f.fn;
          n->lhs = std::move(arg);
          return n;
        }
      }
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

Expression::Expression(const std::string& text) : text_(text) {
  Parser p{text};
  root_ = p.parse();
}

double Expression::operator()(double y) const {
  if (!root_) throw Error("Expression: evaluating empty expression");
  return root_->eval(y);
}

}  // namespace solwave
