#pragma once

#include <stdexcept>
#include <string>

namespace rosesum {

/// Input outside an operation's domain (bad generator index, trivial class, t out of range, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A weight or metric fails the hypotheses a driver requires.
class HypothesisViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A hard resource cap was hit. Never silently truncated.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A tail bound was requested for a weight carrying no decay certificate.
class NoCertificate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A census does not reach the radius a computation needs.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A persisted census is unreadable or carries the wrong version stamp.
class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rosesum
