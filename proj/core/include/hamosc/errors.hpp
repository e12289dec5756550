#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hamosc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class NotPSD : public Error {
 public:
  using Error::Error;
};

/// Expression syntax error. `offset` is a byte offset into the source text.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
      : Error(format(offset, expected, found)), offset_(offset), expected_(std::move(expected)) {}

  /// Same error reported from inside a larger document; `context` names the field.
  ParseError(const ParseError& inner, const std::string& context)
      : Error(context + ": " + inner.what()),
        offset_(inner.offset_),
        expected_(inner.expected_),
        context_(context) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& context() const noexcept { return context_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string format(std::size_t offset, const std::vector<std::string>& expected,
                            const std::string& found) {
    std::string msg = "parse error at offset " + std::to_string(offset) + ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    msg += ", found " + found;
    return msg;
  }

  std::size_t offset_;
  std::vector<std::string> expected_;
  std::string context_;
};

/// Evaluation failed (log of a nonpositive number, division by zero, non-finite result).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what, double t = 0.0, std::string where = {})
      : Error(where.empty() ? what : where + ": " + what), t_(t), where_(std::move(where)) {}

  double t() const noexcept { return t_; }
  const std::string& where() const noexcept { return where_; }

 private:
  double t_;
  std::string where_;
};

class StepSizeUnderflow : public Error {
 public:
  StepSizeUnderflow(double t, double h)
      : Error("step size underflow at t=" + std::to_string(t) + " (h=" + std::to_string(h) + ")"),
        t_(t) {}
  double t() const noexcept { return t_; }

 private:
  double t_;
};

class NonPositiveP : public Error {
 public:
  using Error::Error;
};

class InterpolationGap : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class NoSolution : public Error {
 public:
  using Error::Error;
};

class SingularB : public Error {
 public:
  explicit SingularB(double t)
      : Error("B(t) is not positive definite at t=" + std::to_string(t)), t_(t) {}
  double t() const noexcept { return t_; }

 private:
  double t_;
};

class IndefiniteB : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration document (schema, dimensions, unknown keys).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hamosc
