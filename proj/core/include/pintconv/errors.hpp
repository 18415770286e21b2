#pragma once

#include <stdexcept>
#include <string>

namespace pintconv {

/// I + wA is singular (w sits on a pole of the stability function).
class PoleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerically measured order disagrees with the declared one.
class OrderMismatch : public std::runtime_error {
 public:
  OrderMismatch(std::string scheme, int declared, int measured);
  int declared() const noexcept { return declared_; }
  int measured() const noexcept { return measured_; }
  const std::string& scheme() const noexcept { return scheme_; }

 private:
  std::string scheme_;
  int declared_;
  int measured_;
};

/// The (theta-scaled) coarse propagator is not contractive at w.
class StabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stage system in the matrix-path time stepper could not be solved.
class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotTruncatedExponential : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user configuration: unknown scheme, bad k, bad key, ...
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pintconv
