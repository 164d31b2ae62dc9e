#ifndef SNM_ERRORS_HPP
#define SNM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace snm {

/// Argument outside the mathematical domain of an operation (e.g. |x| >= 2 for g_n).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller-side contract violation: a table that is too small, a horizon that was exceeded.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Allocation or similar resource exhaustion.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A quadrature that did not reach its tolerance. Carries what was achieved.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double value, double error)
      : std::runtime_error(what + " (value " + std::to_string(value) +
                           ", achieved error " + std::to_string(error) + ")"),
        value_(value),
        error_(error) {}

  double value() const noexcept { return value_; }
  double achieved_error() const noexcept { return error_; }

 private:
  double value_;
  double error_;
};

/// Malformed input file; `line()` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A zero search whose count audit failed.
class IncompleteZerosError : public std::runtime_error {
 public:
  IncompleteZerosError(double window_lo, double window_hi, long found, long expected)
      : std::runtime_error("zero list incomplete in window [" + std::to_string(window_lo) + ", " +
                           std::to_string(window_hi) + "]: found " + std::to_string(found) +
                           ", expected " + std::to_string(expected)),
        lo_(window_lo),
        hi_(window_hi) {}

  double window_lo() const noexcept { return lo_; }
  double window_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

}  // namespace snm

#endif  // SNM_ERRORS_HPP
