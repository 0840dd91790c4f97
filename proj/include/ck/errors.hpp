#pragma once

#include <stdexcept>
#include <string>

namespace ck {

/// Root of every error raised by the kernel.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands come from incompatible variable contexts (same name, different
/// invertibility).
class ContextError : public Error {
 public:
  using Error::Error;
};

/// Mathematically undefined request: division by a non-unit, negative powers
/// of an ordinary variable, and so on.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// A structure table violates skew-symmetry or the Jacobi identity.
class AxiomViolation : public Error {
 public:
  using Error::Error;
};

/// Raised by the derivation decomposition; `step()` names the failed stage.
class NotADerivation : public Error {
 public:
  NotADerivation(int step, const std::string& message)
      : Error("step " + std::to_string(step) + ": " + message), step_(step) {}

  int step() const noexcept { return step_; }

 private:
  int step_;
};

/// A grade or generator index outside the window a table was built for.
class WindowError : public Error {
 public:
  using Error::Error;
};

/// The truncation window is too small to decide a property either way.
class Inconclusive : public Error {
 public:
  using Error::Error;
};

/// A distribution could not be identified with generators of a structure table.
class Mismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace ck
