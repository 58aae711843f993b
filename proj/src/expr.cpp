#include "symmorse/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "symmorse/error.hpp"

namespace symmorse {

struct Expression::Node {
  enum class Kind { number, var, neg, add, sub, mul, div, pow, func } kind;
  double value = 0;
  int exponent = 0;
  std::string name;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

const char* const functions[] = {"tanh", "sech", "exp", "sin", "cos", "abs"};

class Parser {
 public:
  Parser(const std::string& s, int line, int column) : s_(s), line_(line), col0_(column) {}

  NodePtr run() {
    NodePtr e = expr();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, col0_ + static_cast<int>(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr left = term();
    for (;;) {
      if (eat('+')) {
        left = make(Kind::add, left, term());
      } else if (eat('-')) {
        left = make(Kind::sub, left, term());
      } else {
        return left;
      }
    }
  }

  NodePtr term() {
    NodePtr left = factor();
    for (;;) {
      if (eat('*')) {
        left = make(Kind::mul, left, factor());
      } else if (eat('/')) {
        left = make(Kind::div, left, factor());
      } else {
        return left;
      }
    }
  }

  NodePtr factor() {
    if (eat('-')) return make(Kind::neg, factor());
    if (eat('+')) return factor();
    NodePtr b = base();
    if (!eat('^')) return b;
    skip();
    bool negative = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected an integer exponent");
    if (pos_ - start > 6) {
      pos_ = start;
      fail("exponent too large");
    }
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::pow;
    n->a = b;
    n->exponent = std::stoi(s_.substr(start, pos_ - start)) * (negative ? -1 : 1);
    return n;
  }

  NodePtr base() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string word = s_.substr(start, pos_ - start);
      if (word == "t") return make(Kind::var);
      for (const char* f : functions) {
        if (word == f) {
          if (!eat('(')) fail("expected '(' after " + word);
          auto n = std::make_shared<Expression::Node>();
          n->kind = Kind::func;
          n->name = word;
          n->a = expr();
          if (!eat(')')) fail("expected ')'");
          return n;
        }
      }
      pos_ = start;
      fail("unknown name '" + word + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t k = pos_ + 1;
      if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
      if (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) {
        pos_ = k;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    const std::string text = s_.substr(start, pos_ - start);
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) {
      pos_ = start;
      fail("malformed number '" + text + "'");
    }
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::number;
    n->value = v;
    return n;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_;
  int col0_;
};

double eval(const Expression::Node& n, double t) {
  switch (n.kind) {
    case Kind::number:
      return n.value;
    case Kind::var:
      return t;
    case Kind::neg:
      return -eval(*n.a, t);
    case Kind::add:
      return eval(*n.a, t) + eval(*n.b, t);
    case Kind::sub:
      return eval(*n.a, t) - eval(*n.b, t);
    case Kind::mul:
      return eval(*n.a, t) * eval(*n.b, t);
    case Kind::div:
      return eval(*n.a, t) / eval(*n.b, t);
    case Kind::pow: {
      const double x = eval(*n.a, t);
      if (n.exponent == 0) return 1.0;
      double r = 1.0;
      for (int k = 0; k < std::abs(n.exponent); ++k) r *= x;
      return n.exponent > 0 ? r : 1.0 / r;
    }
    case Kind::func: {
      const double x = eval(*n.a, t);
      if (n.name == "tanh") return std::tanh(x);
      if (n.name == "sech") return 1.0 / std::cosh(x);
      if (n.name == "exp") return std::exp(x);
      if (n.name == "sin") return std::sin(x);
      if (n.name == "cos") return std::cos(x);
      return std::abs(x);
    }
  }
  return 0.0;
}

void render(const Expression::Node& n, std::ostringstream& out) {
  switch (n.kind) {
    case Kind::number: {
      std::ostringstream v;
      v.precision(17);
      v << n.value;
      out << v.str();
      return;
    }
    case Kind::var:
      out << 't';
      return;
    case Kind::neg:
      out << "(-";
      render(*n.a, out);
      out << ')';
      return;
    case Kind::pow:
      out << '(';
      render(*n.a, out);
      out << '^' << n.exponent << ')';
      return;
    case Kind::func:
      out << n.name << '(';
      render(*n.a, out);
      out << ')';
      return;
    default:
      break;
  }
  const char op = n.kind == Kind::add ? '+' : n.kind == Kind::sub ? '-' : n.kind == Kind::mul ? '*' : '/';
  out << '(';
  render(*n.a, out);
  out << ' ' << op << ' ';
  render(*n.b, out);
  out << ')';
}

}  // namespace

Expression Expression::parse(const std::string& text, int line, int column) {
  Expression e;
  e.root_ = Parser(text, line, column).run();
  const auto first = text.find_first_not_of(" \t");
  const auto last = text.find_last_not_of(" \t");
  e.source_ = first == std::string::npos ? "" : text.substr(first, last - first + 1);
  return e;
}

double Expression::operator()(double t) const { return eval(*root_, t); }

std::string Expression::canonical() const {
  std::ostringstream out;
  render(*root_, out);
  return out.str();
}

}  // namespace symmorse
