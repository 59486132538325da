#pragma once

#include <functional>

namespace simplexdiff {

// Two-point mean theta(s,t) = (s-t)/(phi'(s)-phi'(t)) attached to a convex
// free-energy density phi. The logarithmic kind (phi = u log u - u + 1, the
// KL free energy) is the workhorse; generic phi is supported with caller
// supplied derivatives. The custom-theta kind carries a mean that is not
// generated by any phi (e.g. the geometric mean) and models the canonical
// zero-potential diffusion: its free energy is identically zero.
class MeanFunction {
 public:
  enum class Kind { kLogarithmic, kGenericPhi, kCustomTheta };

  static MeanFunction kl();
  static MeanFunction from_phi(std::function<double(double)> phi,
                               std::function<double(double)> phi_prime,
                               std::function<double(double)> phi_double_prime);
  // theta(s,t) = sqrt(s t); zero potential.
  static MeanFunction geometric();
  static MeanFunction custom_theta(std::function<double(double, double)> theta);

  Kind kind() const { return kind_; }
  bool has_potential() const { return kind_ != Kind::kCustomTheta; }

  // Continuous through s = t: below |s-t| <= 1e-9 max(s,t) the limit value
  // 1/phi''((s+t)/2) is used. Throws on nonpositive arguments.
  double theta(double s, double t) const;

  double phi(double u) const;
  double phi_prime(double u) const;
  double phi_double_prime(double u) const;

 private:
  explicit MeanFunction(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::function<double(double)> phi_, phi_prime_, phi_double_prime_;
  std::function<double(double, double)> theta_;
};

}  // namespace simplexdiff
