#pragma once

#include <stdexcept>
#include <string>

namespace wce {

// Error taxonomy shared by every module; the C API maps these codes 1:1.
enum class ErrorCode {
  BadArgument,
  UnknownCell,
  Eval,
  Parse,
  InvalidExponent,
  RegimeUnsupported,
  NonFiniteData,
  ZeroOperator,
  InsufficientData,
  Generator,
  Config,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace wce
