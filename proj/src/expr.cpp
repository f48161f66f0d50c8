#include "qc/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace qc {

struct Expr::Node {
  enum Kind { Const, Var, Unary, Binary } kind;
  double value = 0.0;
  int var = 0;
  char op = 0;  // + - * / ^
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> a, b;

  double eval(const std::vector<double>& x) const {
    switch (kind) {
      case Const:
        return value;
      case Var:
        return x[var];
      case Unary:
        return fn(a->eval(x));
      case Binary: {
        double l = a->eval(x), r = b->eval(x);
        switch (op) {
          case '+':
            return l + r;
          case '-':
            return l - r;
          case '*':
            return l * r;
          case '/':
            return l / r;
          case '^':
            return std::pow(l, r);
        }
        return 0.0;
      }
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct Parser {
  const std::string& s;
  size_t pos = 0;
  int nvars;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  NodePtr make_const(double v) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Node::Const;
    n->value = v;
    return n;
  }
  NodePtr make_bin(char op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Node::Binary;
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    while (true) {
      skip();
      if (eat('+'))
        lhs = make_bin('+', lhs, term());
      else if (eat('-'))
        lhs = make_bin('-', lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = power();
    while (true) {
      skip();
      if (eat('*'))
        lhs = make_bin('*', lhs, power());
      else if (eat('/'))
        lhs = make_bin('/', lhs, power());
      else
        return lhs;
    }
  }

  NodePtr power() {
    NodePtr base = unary();
    skip();
    if (eat('^')) return make_bin('^', base, power());  // right assoc
    return base;
  }

  NodePtr unary() {
    skip();
    if (eat('-')) return make_bin('-', make_const(0.0), unary());
    if (eat('+')) return unary();
    return primary();
  }

  NodePtr primary() {
    skip();
    if (pos >= s.size()) throw std::invalid_argument("expr: unexpected end");
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t end;
      double v = std::stod(s.substr(pos), &end);
      pos += end;
      return make_const(v);
    }
    if (eat('(')) {
      NodePtr e = expression();
      if (!eat(')')) throw std::invalid_argument("expr: missing ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos;
      while (pos < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[pos])) ||
              s[pos] == '_'))
        ++pos;
      std::string name = s.substr(start, pos - start);
      if (name.size() >= 2 && name[0] == 'x') {
        int v = std::stoi(name.substr(1));
        if (v < 1 || v > nvars)
          throw std::invalid_argument("expr: variable " + name +
                                      " out of range");
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Node::Var;
        n->var = v - 1;
        return n;
      }
      if (name == "pi") return make_const(M_PI);
      if (name == "e") return make_const(M_E);
      static const std::map<std::string, double (*)(double)> fns = {
          {"sin", std::sin},   {"cos", std::cos},   {"tan", std::tan},
          {"exp", std::exp},   {"log", std::log},   {"sqrt", std::sqrt},
          {"tanh", std::tanh}, {"sinh", std::sinh}, {"cosh", std::cosh},
          {"abs", std::fabs},  {"atan", std::atan}};
      auto it = fns.find(name);
      if (it == fns.end())
        throw std::invalid_argument("expr: unknown function '" + name + "'");
      if (!eat('(')) throw std::invalid_argument("expr: expected '('");
      NodePtr arg = expression();
      if (!eat(')')) throw std::invalid_argument("expr: missing ')'");
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Node::Unary;
      n->fn = it->second;
      n->a = arg;
      return n;
    }
    throw std::invalid_argument(std::string("expr: unexpected '") + c + "'");
  }
};

}  // namespace

Expr Expr::parse(const std::string& text, int nvars) {
  Parser p{text, 0, nvars};
  Expr e;
  e.root_ = p.expression();
  p.skip();
  if (p.pos != text.size())
    throw std::invalid_argument("expr: trailing input at '" +
                                text.substr(p.pos) + "'");
  e.text_ = text;
  return e;
}

double Expr::eval(const std::vector<double>& x) const {
  return root_->eval(x);
}

}  // namespace qc
