#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fuzzylimit {

// Base of every error thrown by the library. Callers that only care about
// "did it work" catch this; the CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Triangular points out of order, degenerate grids and the like.
class InvalidShape : public Error {
 public:
  using Error::Error;
};

// Non-finite scalars where a finite one is required.
class InvalidValue : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of an operation (alpha outside (0,1],
// sqrt of a negative, a box straddling a piecewise boundary, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Alpha-cut samples that are not nested.
class InconsistentCuts : public Error {
 public:
  using Error::Error;
};

class DivisionByZeroInterval : public DomainError {
 public:
  DivisionByZeroInterval(std::string subexpr, const std::string& what)
      : DomainError(what), subexpr_(std::move(subexpr)) {}
  const std::string& subexpression() const noexcept { return subexpr_; }

 private:
  std::string subexpr_;
};

class LexError : public Error {
 public:
  LexError(std::size_t offset, const std::string& what)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::vector<std::string> expected, const std::string& what)
      : Error(what + " at offset " + std::to_string(position)),
        position_(position),
        expected_(std::move(expected)) {}
  std::size_t position() const noexcept { return position_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Evaluation failure at a specific alpha level of a fuzzy evaluation.
class LevelError : public Error {
 public:
  LevelError(double alpha, const std::string& what)
      : Error("alpha=" + std::to_string(alpha) + ": " + what), alpha_(alpha) {}
  double alpha() const noexcept { return alpha_; }

 private:
  double alpha_;
};

}  // namespace fuzzylimit
