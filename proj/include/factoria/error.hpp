#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace factoria {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation (s <= kappa, odd k, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// P(s) = target has no real solution right of max(kappa, 0).
class NoRootError : public Error {
 public:
  NoRootError(const std::string& what, double supremum)
      : Error(what), supremum_(supremum) {}
  // Largest value of P observed on the domain.
  double supremum() const { return supremum_; }

 private:
  double supremum_;
};

class PrecisionError : public Error {
 public:
  using Error::Error;
};

// An analytic identity that must hold exactly failed numerically.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Exact count exceeded the configured integer width.
class OverflowError : public Error {
 public:
  OverflowError(const std::string& what, std::uint64_t n) : Error(what), n_(n) {}
  std::uint64_t n() const { return n_; }

 private:
  std::uint64_t n_;
};

// Memory or output-size cap exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace factoria
