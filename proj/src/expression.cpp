#include "shorn/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "shorn/errors.hpp"

namespace shorn {

struct Expression::Node {
  enum class Kind { Constant, Variable, Unary, Binary, Conditional, Call } kind;
  double value = 0.0;
  std::string op;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, std::string op, std::vector<NodePtr> args, double value = 0.0) {
  return std::make_shared<const Expression::Node>(Expression::Node{k, value, std::move(op), std::move(args)});
}

class Parser {
public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = conditional();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("generator expression \"" + s_ + "\": " + msg + " at offset " +
                     std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(const std::string& tok) {
    skip();
    if (s_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(const std::string& tok) {
    if (!accept(tok)) fail("expected '" + tok + "'");
  }

  NodePtr conditional() {
    NodePtr c = comparison();
    if (accept("?")) {
      NodePtr a = conditional();
      expect(":");
      NodePtr b = conditional();
      return make(Kind::Conditional, "?", {c, a, b});
    }
    return c;
  }

  NodePtr comparison() {
    NodePtr lhs = additive();
    for (const char* op : {"<=", ">=", "==", "!=", "<", ">"}) {
      if (accept(op)) return make(Kind::Binary, op, {lhs, additive()});
    }
    return lhs;
  }

  NodePtr additive() {
    NodePtr lhs = multiplicative();
    for (;;) {
      if (accept("+")) lhs = make(Kind::Binary, "+", {lhs, multiplicative()});
      else if (accept("-")) lhs = make(Kind::Binary, "-", {lhs, multiplicative()});
      else return lhs;
    }
  }

  NodePtr multiplicative() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept("*")) lhs = make(Kind::Binary, "*", {lhs, unary()});
      else if (accept("/")) lhs = make(Kind::Binary, "/", {lhs, unary()});
      else if (accept("%")) lhs = make(Kind::Binary, "%", {lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept("-")) return make(Kind::Unary, "-", {unary()});
    if (accept("+")) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept("^")) return make(Kind::Binary, "^", {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char ch = s_[pos_];
    if (ch == '(') {
      ++pos_;
      NodePtr n = conditional();
      expect(")");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      std::size_t used = 0;
      const double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      return make(Kind::Constant, "", {}, v);
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "i") return make(Kind::Variable, "i", {});
      if (name == "pi") return make(Kind::Constant, "", {}, std::numbers::pi);
      if (name == "e") return make(Kind::Constant, "", {}, std::numbers::e);
      static const std::vector<std::pair<std::string, int>> functions = {
          {"sin", 1}, {"cos", 1}, {"tan", 1}, {"exp", 1}, {"log", 1},  {"sqrt", 1}, {"abs", 1},
          {"floor", 1}, {"ceil", 1}, {"min", 2}, {"max", 2}, {"pow", 2}};
      for (const auto& [fname, arity] : functions) {
        if (fname != name) continue;
        expect("(");
        std::vector<NodePtr> args{conditional()};
        while (accept(",")) args.push_back(conditional());
        expect(")");
        if (static_cast<int>(args.size()) != arity)
          fail(name + " takes " + std::to_string(arity) + " argument(s)");
        return make(Kind::Call, name, std::move(args));
      }
      fail("unknown identifier '" + name + "'");
    }
    fail("unexpected '" + std::string(1, ch) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, double i) {
  switch (n.kind) {
  case Kind::Constant: return n.value;
  case Kind::Variable: return i;
  case Kind::Unary: return -eval(*n.args[0], i);
  case Kind::Conditional: return eval(*n.args[0], i) != 0.0 ? eval(*n.args[1], i) : eval(*n.args[2], i);
  case Kind::Binary: {
    const double a = eval(*n.args[0], i), b = eval(*n.args[1], i);
    const std::string& op = n.op;
    if (op == "+") return a + b;
    if (op == "-") return a - b;
    if (op == "*") return a * b;
    if (op == "/") return a / b;
    if (op == "%") return std::fmod(a, b);
    if (op == "^") return std::pow(a, b);
    if (op == "<") return a < b;
    if (op == "<=") return a <= b;
    if (op == ">") return a > b;
    if (op == ">=") return a >= b;
    if (op == "==") return a == b;
    return a != b;
  }
  case Kind::Call: {
    const double a = eval(*n.args[0], i);
    const std::string& f = n.op;
    if (f == "sin") return std::sin(a);
    if (f == "cos") return std::cos(a);
    if (f == "tan") return std::tan(a);
    if (f == "exp") return std::exp(a);
    if (f == "log") return std::log(a);
    if (f == "sqrt") return std::sqrt(a);
    if (f == "abs") return std::abs(a);
    if (f == "floor") return std::floor(a);
    if (f == "ceil") return std::ceil(a);
    const double b = eval(*n.args[1], i);
    if (f == "min") return std::min(a, b);
    if (f == "max") return std::max(a, b);
    return std::pow(a, b);
  }
  }
  return 0.0;
}

} // namespace

Expression::Expression(std::string source) : source_(std::move(source)) {
  root_ = Parser(source_).parse();
}

double Expression::operator()(double i) const { return eval(*root_, i); }

} // namespace shorn
