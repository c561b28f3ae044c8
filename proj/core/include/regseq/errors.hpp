#pragma once

#include <stdexcept>
#include <string>

namespace regseq {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a mathematical function (x < x0, y < h(m0), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller violated an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Precision escalation could not certify a floor or a comparison.
class CertificationError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds a configured resource cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Empty sequence window, zero signal and similar inputs with no meaningful output.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Exact integer arithmetic would overflow 64 bits.
class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace regseq
