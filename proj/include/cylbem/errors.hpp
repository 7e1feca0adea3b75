#pragma once

#include <stdexcept>
#include <string>

namespace cylbem {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (z = 0, Im z > 0, bad order).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A runtime accuracy sentinel (e.g. the Bessel Wronskian) tripped.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// Aliasing sum that does not converge for the requested basis.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class SingularGramError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// Operator/basis combination the assembler does not support.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NotCirculantError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or command line.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Non-fatal conditions attached to results instead of being thrown.
enum Warning : unsigned {
  kNoWarning = 0,
  kTruncationWarning = 1u << 0,
  kNearSingularWarning = 1u << 1,
  kResonanceFlag = 1u << 2,
  kDivisionFlag = 1u << 3,
};

std::string describe_warnings(unsigned flags);

}  // namespace cylbem
