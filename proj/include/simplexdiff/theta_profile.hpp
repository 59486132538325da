#pragma once

#include <functional>

#include "simplexdiff/mean_function.hpp"
#include "simplexdiff/reaction_network.hpp"
#include "simplexdiff/special_functions.hpp"

namespace simplexdiff {

// Mobility profile theta(x) = theta_12(x, 1-x) of a two-point network,
// defined on (0,1). The certificate describes how theta^{-1/2} behaves at
// the endpoints, which is the integrand family every consumer quadratures
// (Wasserstein coordinate, stationary density, Wright-Fisher transform).
struct ThetaProfile {
  std::function<double(double)> theta;
  std::function<double(double)> theta_prime;
  QuadCertificate certificate = QuadCertificate::kSmooth;
  bool symmetric = false;

  // theta(x) = 2 sqrt(x (1-x)), the closed-form example; analytic derivative.
  static ThetaProfile sqrt_canonical();
  static ThetaProfile constant(double value = 1.0);
  // Profile of a two-point network under the given mean: theta_12(x, 1-x)
  // with arguments scaled by the stationary vector. theta_prime falls back
  // to a 5-point central difference.
  static ThetaProfile from_network_d2(const ReactionNetwork& net, const MeanFunction& mf);
};

}  // namespace simplexdiff
