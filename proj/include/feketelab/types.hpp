#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace feketelab {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Thrown when an operation needs a capability the model does not provide
// (e.g. the equilibrium potential of a custom field, or a Ginibre-only
// closed form requested from a numeric kernel).
class CapabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Thrown when a configuration contains coincident points and the requested
// quantity is undefined (gradients, residuals). Plain energy evaluation
// reports coincidence as an exact +inf instead.
class CoincidentPointsError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Thrown when the monomial moment matrix cannot be factored at the
// requested dimension; `degree` is the first failing basis degree.
class IllConditionedError : public std::runtime_error {
 public:
  IllConditionedError(const std::string& what, int degree)
      : std::runtime_error(what), degree_(degree) {}
  int degree() const { return degree_; }

 private:
  int degree_ = -1;
};

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace feketelab
