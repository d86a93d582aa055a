#include "simplexgeo/expression.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "simplexgeo/error.hpp"

namespace simplexgeo {

namespace {

class Parser {
 public:
  Parser(std::string_view src, std::vector<Expression::Instr>& out) : src_(src), out_(out) {}

  void parse() {
    expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
  }

 private:
  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& msg) const {
    throw GeometryError(ErrorKind::ParseError, msg + " at column " + std::to_string(pos_ + 1) + " in '" +
                                                   std::string(src_) + "'");
  }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expr() {
    term();
    for (;;) {
      if (accept('+')) {
        term();
        out_.push_back({Op::add});
      } else if (accept('-')) {
        term();
        out_.push_back({Op::sub});
      } else {
        return;
      }
    }
  }

  void term() {
    unary();
    for (;;) {
      if (accept('*')) {
        unary();
        out_.push_back({Op::mul});
      } else if (accept('/')) {
        unary();
        out_.push_back({Op::div});
      } else {
        return;
      }
    }
  }

  void unary() {
    if (accept('-')) {
      unary();
      out_.push_back({Op::neg});
    } else if (accept('+')) {
      unary();
    } else {
      power();
    }
  }

  void power() {
    primary();
    if (accept('^')) {
      unary();
      out_.push_back({Op::pow});
    }
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  void primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    const char c = src_[pos_];
    if (c == 't') {
      ++pos_;
      out_.push_back({Op::push_t});
      return;
    }
    if (c == '(') {
      ++pos_;
      expr();
      if (!accept(')')) fail("expected ')'");
      return;
    }
    if (is_digit(c) || c == '.') {
      number();
      return;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  void number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t k = 0;
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_, ++k;
      return k;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail("malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent");
    }
    double value = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc() || ptr != src_.data() + pos_) fail("malformed number");
    out_.push_back({Op::push_const, value});
  }

  std::string_view src_;
  std::vector<Expression::Instr>& out_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view source) {
  Expression e;
  e.source_ = std::string(source);
  Parser(e.source_, e.program_).parse();
  return e;
}

double Expression::operator()(double t) const {
  std::vector<double> stack;
  stack.reserve(program_.size());
  auto pop = [&stack] {
    double v = stack.back();
    stack.pop_back();
    return v;
  };
  for (const Instr& in : program_) {
    switch (in.op) {
      case Op::push_const: stack.push_back(in.value); break;
      case Op::push_t: stack.push_back(t); break;
      case Op::neg: stack.back() = -stack.back(); break;
      default: {
        const double b = pop();
        double& a = stack.back();
        switch (in.op) {
          case Op::add: a += b; break;
          case Op::sub: a -= b; break;
          case Op::mul: a *= b; break;
          case Op::div: a /= b; break;
          case Op::pow: a = std::pow(a, b); break;
          default: break;
        }
      }
    }
  }
  return stack.back();
}

}  // namespace simplexgeo
