#pragma once

#include <stdexcept>
#include <string>

namespace hgnn {

// Base for every error raised by the library. Subclasses name the failure
// category so callers (the bench harness in particular) can report it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class DegenerateStructureError : public Error {
 public:
  using Error::Error;
};

// CG failed to reach the requested tolerance.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double worst_residual)
      : Error(what), worst_residual_(worst_residual) {}
  double worst_residual() const noexcept { return worst_residual_; }

 private:
  double worst_residual_;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace hgnn
