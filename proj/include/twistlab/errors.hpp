#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace twistlab {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated (out-of-range site, pole of
/// the R-matrix, mismatched dimensions, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// The underlying eigen-decomposition or linear solve failed.
class DecompositionError : public Error {
public:
  using Error::Error;
};

/// An iterative solver stopped without meeting its tolerance. The last iterate
/// is kept so callers can inspect or reseed from it.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, std::vector<std::complex<double>> last_iterate,
                   double last_residual)
      : Error(what), last_iterate_(std::move(last_iterate)), last_residual_(last_residual) {}

  const std::vector<std::complex<double>>& last_iterate() const { return last_iterate_; }
  double last_residual() const { return last_residual_; }

private:
  std::vector<std::complex<double>> last_iterate_;
  double last_residual_;
};

}  // namespace twistlab
