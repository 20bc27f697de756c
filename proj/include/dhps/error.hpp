#pragma once

#include <stdexcept>
#include <string>

namespace dhps {

/// Base of every library error; callers that do not care about the kind can
/// catch this one.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature node doubling hit its cap before two estimates agreed.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// A memory or span budget would be exceeded (sieve segments, search arrays).
class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

/// A work budget (partial sums, quintuples, wall time) would be exceeded.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A prime table does not match the sum it is asked to evaluate.
class SpecMismatch : public Error {
 public:
  using Error::Error;
};

/// lambda1/lambda2 ran out of convergents before reaching the q0 floor.
class DegenerateRatio : public Error {
 public:
  using Error::Error;
};

/// One of the five prime windows of a search is empty.
class EmptyWindow : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration; `path()` is a JSON pointer to the bad field.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Problem instance outside the hypotheses of the theorem it targets.
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dhps
