#pragma once

// Arithmetic expressions in one variable `t`, used for the cone metric
// coefficient functions.
//
// Grammar (whitespace between tokens is ignored):
//
//   expr    := term   (('+' | '-') term)*
//   term    := unary  (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := NUMBER | 't' | '(' expr ')'
//   NUMBER  := DIGITS ('.' DIGITS?)? EXP? | '.' DIGITS EXP?
//   EXP     := ('e' | 'E') ('+' | '-')? DIGITS
//
// So "-t^2" is -(t^2) and "2^3^2" is 2^(3^2). Powers use std::pow.

#include <string>
#include <string_view>
#include <vector>

namespace simplexgeo {

class Expression {
 public:
  /// Throws GeometryError(ParseError) naming the 1-based column of the problem.
  static Expression parse(std::string_view source);

  double operator()(double t) const;

  const std::string& source() const { return source_; }

  enum class Op { push_const, push_t, add, sub, mul, div, pow, neg };
  struct Instr {
    Op op;
    double value = 0;
  };

 private:
  std::string source_;
  std::vector<Instr> program_;  // postfix
};

}  // namespace simplexgeo
