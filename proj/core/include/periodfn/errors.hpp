#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace periodfn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position()` is the 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Unbound parameter or a domain violation while evaluating an expression.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Truncated-series arithmetic that has no analytic answer at 0, or an
/// order request the operands cannot satisfy.
class SeriesError : public Error {
 public:
  using Error::Error;
};

/// The potential is not normalized (g(0)=0, g'(0)=1) or does not define a
/// center on the located well.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Root solves, quadrature or integration that failed to meet their contract.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace periodfn
