#pragma once

#include <stdexcept>
#include <string>

namespace gtours {

// Base class for errors raised by the estimation engines.  The C API maps
// each subclass to a distinct status code.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument: bad tour parameters, out-of-range correlation, etc.
class domain_error : public error {
 public:
  using error::error;
};

// A quantity the engine cannot compute (e.g. a correlation-formula order
// with no implemented reduction).
class unsupported_error : public error {
 public:
  using error::error;
};

// An iterative scheme failed to reach its tolerance within its budget.
class convergence_error : public error {
 public:
  using error::error;
};

// A requested covariance matrix is not positive semidefinite.
class covariance_error : public error {
 public:
  using error::error;
};

// A fit was requested on data that cannot support it (too few or nearly
// coincident abscissae).
class fit_error : public error {
 public:
  using error::error;
};

}  // namespace gtours
