#pragma once

#include <stdexcept>
#include <string>

namespace bitomo {

/// Base class for all bitomo errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An argument is outside an operation's domain (empty dims, n = 0, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Integer arithmetic left the representable range.
class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& msg) : Error(msg) {}
};

/// Structurally invalid input data (bad fit table, unparsable state file).
class MalformedInputError : public Error {
 public:
  explicit MalformedInputError(const std::string& msg) : Error(msg) {}
};

/// A matrix claimed to be a state failed validation (not PSD, bad trace).
class InvalidStateError : public Error {
 public:
  explicit InvalidStateError(const std::string& msg) : Error(msg) {}
};

/// A measurement frame does not span its target operator space.
class IncompleteFrameError : public Error {
 public:
  IncompleteFrameError(const std::string& msg, int deficit)
      : Error(msg), deficit_(deficit) {}
  /// Number of missing independent directions.
  int deficit() const { return deficit_; }

 private:
  int deficit_;
};

/// A probability vector lies outside the frame's range space.
class InconsistentDataError : public Error {
 public:
  explicit InconsistentDataError(const std::string& msg) : Error(msg) {}
};

/// The symbolic pipeline produced an inconsistent or underdetermined system.
class DerivationError : public Error {
 public:
  explicit DerivationError(const std::string& msg) : Error(msg) {}
};

/// Requested ideality level is outside the supported range.
class UnsupportedLevelError : public DomainError {
 public:
  explicit UnsupportedLevelError(const std::string& msg) : DomainError(msg) {}
};

}  // namespace bitomo
