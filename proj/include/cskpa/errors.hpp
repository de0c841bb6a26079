#pragma once

#include <stdexcept>
#include <string>

namespace cskpa {

/// Base class for every error raised by the library. Each subclass maps to a
/// distinct process exit code in the command-line front end.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

/// A precondition on an argument or configuration does not hold.
class DomainError : public Error {
public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Plaintext entry is zero where a known-plaintext reduction needs x_l != 0.
class ZeroEntryError : public DomainError {
public:
  using DomainError::DomainError;
};

/// (x, y) pair whose parity or magnitude is impossible for an antipodal row.
class InconsistentPairError : public DomainError {
public:
  using DomainError::DomainError;
};

class BudgetExceeded : public Error {
public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// A randomized search ran out of draws.
class SearchExhausted : public BudgetExceeded {
public:
  using BudgetExceeded::BudgetExceeded;
};

class ConvergenceError : public Error {
public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

class IoError : public Error {
public:
  using Error::Error;
  int exit_code() const noexcept override { return 5; }
};

/// Keystream has fewer bits left than requested: reusing it would repeat a matrix.
class PeriodExhausted : public Error {
public:
  using Error::Error;
  int exit_code() const noexcept override { return 6; }
};

/// An exact computation failed its own cross-check.
class VerificationError : public Error {
public:
  using Error::Error;
  int exit_code() const noexcept override { return 7; }
};

namespace detail {

template <typename E = DomainError>
inline void require(bool cond, const std::string& what) {
  if (!cond) throw E(what);
}

}  // namespace detail
}  // namespace cskpa
