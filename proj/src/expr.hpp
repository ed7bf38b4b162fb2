#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wce {

// Compiled closed-form expression in a single integer-index variable `n`.
//
// Grammar: decimal constants, the variable `n`, binary + - * / ^ (power,
// right-associative), unary minus and parentheses. Parsing compiles to a
// small postfix program; evaluation is a stack machine and never throws —
// division by zero and domain errors surface as non-finite values, which
// the caller (Weight::eval) turns into an Eval error.
class ExprProgram {
 public:
  static ExprProgram parse(std::string_view source);  // throws Error(Parse)

  double eval(double n) const noexcept;
  const std::string& source() const noexcept { return source_; }

 private:
  enum class Op : std::uint8_t { Const, Index, Add, Sub, Mul, Div, Pow, Neg };
  friend class ExprParser;

  std::vector<Op> ops_;
  std::vector<double> consts_;
  std::string source_;
};

}  // namespace wce
