#pragma once

#include <stdexcept>
#include <string>

namespace simplexdiff {

// Base class for all library failures. `kind()` is a stable identifier
// (e.g. "NotConnected") that the CLI prints to stderr before exiting.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error("ConfigError", what) {}
};

inline Error bad_q_matrix(const std::string& what) { return Error("BadQMatrix", what); }
inline Error not_connected(const std::string& what) { return Error("NotConnected", what); }
inline Error not_detailed_balanced(const std::string& what) {
  return Error("NotDetailedBalanced", what);
}
inline Error boundary_singular(const std::string& what) {
  return Error("BoundarySingular", what);
}
inline Error lattice_too_large(const std::string& what) {
  return Error("LatticeTooLarge", what);
}
inline Error unstable_timestep(const std::string& what) {
  return Error("UnstableTimestep", what);
}
inline Error step_left_simplex(const std::string& what) {
  return Error("StepLeftSimplex", what);
}
inline Error non_integrable_theta(const std::string& what) {
  return Error("NonIntegrableTheta", what);
}
inline Error quadrature_failure(const std::string& what) {
  return Error("QuadratureFailure", what);
}
inline Error truncation_warning(const std::string& what) {
  return Error("TruncationWarning", what);
}
inline Error invalid_argument_error(const std::string& what) {
  return Error("InvalidArgument", what);
}

}  // namespace simplexdiff
