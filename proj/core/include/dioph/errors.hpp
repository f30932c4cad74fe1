#pragma once

#include <stdexcept>
#include <string>

namespace dioph {

// Process exit codes used by the command-line front end. Each error class
// below maps to exactly one of them.
enum class ExitCode : int {
  ok = 0,
  failure = 1,
  parse = 2,
  cap_exceeded = 3,
  zero_form = 4,
  precision_exhausted = 5,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::failure; }
};

// A precondition of an operation does not hold (negative alpha, beta <= 2
// where a zeta ratio is needed, straddling cone, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::parse; }
};

// An enumeration, materialization or quotient-size cap was hit.
class CapExceeded : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::cap_exceeded; }
};

// |p - alpha q| (or a Hilbert-Schmidt value M*w) is exactly zero.
class ZeroFormError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::zero_form; }
};

// Refinement reached the configured precision cap without deciding the
// question asked (a sign, a floor, a strict comparison).
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::precision_exhausted; }
};

}  // namespace dioph
