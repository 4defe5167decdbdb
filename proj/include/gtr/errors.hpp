#pragma once

#include <stdexcept>
#include <string>

namespace gtr {

enum class ErrorKind {
  DivisionByZero,
  ValuationError,
  PrecisionError,
  ParseError,
  IrrationalSpecialPoint,
  KeyNotSpecial,
  MissingDependency,
  ResidueNonZero,
  OrderDivergence,
  NotSimpleZero,
  HypothesisViolated,
  NonHolomorphicDual,
  NotTrivialDual,
  NonRationalPrimitive,
  MultiPointUnsupported,
  InvalidArgument,
  Internal,
};

const char* error_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures that signal a bug or modelling error rather than bad input.
  bool internal() const noexcept {
    return kind_ == ErrorKind::ResidueNonZero || kind_ == ErrorKind::OrderDivergence ||
           kind_ == ErrorKind::Internal || kind_ == ErrorKind::MissingDependency;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace gtr
