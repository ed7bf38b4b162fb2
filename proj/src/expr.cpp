#include "expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace wce {

namespace {
constexpr int kMaxStack = 64;
}

class ExprParser {
 public:
  explicit ExprParser(std::string_view src) : src_(src) {}

  ExprProgram run() {
    prog_.source_.assign(src_.begin(), src_.end());
    parse_expr();
    skip_ws();
    if (pos_ != src_.size()) {
      fail_here("unexpected trailing input");
    }
    return std::move(prog_);
  }

 private:
  using Op = decltype(ExprProgram::ops_)::value_type;

  void emit(Op op, int arity) {
    prog_.ops_.push_back(op);
    depth_ += 1 - arity;
    if (depth_ > kMaxStack) {
      fail_here("expression too deep");
    }
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  [[noreturn]] void fail_here(const std::string& what) {
    fail(ErrorCode::Parse, "expression parse error at offset " + std::to_string(pos_) +
                               " of '" + std::string(src_) + "': " + what);
  }

  // expr := term (('+'|'-') term)*
  void parse_expr() {
    parse_term();
    for (;;) {
      if (accept('+')) {
        parse_term();
        emit(Op::Add, 2);
      } else if (accept('-')) {
        parse_term();
        emit(Op::Sub, 2);
      } else {
        return;
      }
    }
  }

  // term := unary (('*'|'/') unary)*
  void parse_term() {
    parse_unary();
    for (;;) {
      if (accept('*')) {
        parse_unary();
        emit(Op::Mul, 2);
      } else if (accept('/')) {
        parse_unary();
        emit(Op::Div, 2);
      } else {
        return;
      }
    }
  }

  // unary := '-' unary | power
  void parse_unary() {
    if (accept('-')) {
      parse_unary();
      emit(Op::Neg, 1);
      return;
    }
    parse_power();
  }

  // power := primary ('^' unary)?   (right-associative)
  void parse_power() {
    parse_primary();
    if (accept('^')) {
      parse_unary();
      emit(Op::Pow, 2);
    }
  }

  void parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) {
      fail_here("unexpected end of input");
    }
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      parse_expr();
      if (!accept(')')) {
        fail_here("expected ')'");
      }
      return;
    }
    if (c == 'n') {
      ++pos_;
      // Reject multi-letter identifiers such as `nu`.
      if (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) {
        fail_here("unknown symbol (only the index variable 'n' is available)");
      }
      emit(Op::Index, 0);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double value = 0.0;
      const char* begin = src_.data() + pos_;
      const char* end = src_.data() + src_.size();
      auto res = std::from_chars(begin, end, value);
      if (res.ec != std::errc{}) {
        fail_here("malformed number");
      }
      pos_ = static_cast<std::size_t>(res.ptr - src_.data());
      prog_.consts_.push_back(value);
      emit(Op::Const, 0);
      return;
    }
    fail_here(std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  ExprProgram prog_;
};

ExprProgram ExprProgram::parse(std::string_view source) {
  return ExprParser(source).run();
}

double ExprProgram::eval(double n) const noexcept {
  std::array<double, kMaxStack> stack;
  int sp = 0;
  std::size_t const_cursor = 0;
  for (Op op : ops_) {
    switch (op) {
      case Op::Const:
        stack[sp++] = consts_[const_cursor++];
        break;
      case Op::Index:
        stack[sp++] = n;
        break;
      case Op::Neg:
        stack[sp - 1] = -stack[sp - 1];
        break;
      case Op::Add:
        stack[sp - 2] += stack[sp - 1];
        --sp;
        break;
      case Op::Sub:
        stack[sp - 2] -= stack[sp - 1];
        --sp;
        break;
      case Op::Mul:
        stack[sp - 2] *= stack[sp - 1];
        --sp;
        break;
      case Op::Div:
        stack[sp - 2] /= stack[sp - 1];
        --sp;
        break;
      case Op::Pow:
        stack[sp - 2] = std::pow(stack[sp - 2], stack[sp - 1]);
        --sp;
        break;
    }
  }
  return sp == 1 ? stack[0] : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace wce
