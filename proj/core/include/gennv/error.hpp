#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gennv {

// Argument outside the mathematical domain of an operation (negative Q, p outside (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// C_e + (-1)^(m-1) C_s == 0, i.e. even m with C_e == C_s.
class SingularCriticalRatio : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DegeneratePolynomial : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// theta_{2,m-1} == 0 (or theta_{1,m-1} <= 0) at the requested Q.
class SingularVariance : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input (CSV rows, config files). Carries the 1-based line number when known.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace gennv
