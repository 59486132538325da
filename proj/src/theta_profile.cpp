#include "simplexdiff/theta_profile.hpp"

#include <cmath>

#include "simplexdiff/errors.hpp"

namespace simplexdiff {

namespace {

std::function<double(double)> fd5_derivative(std::function<double(double)> f) {
  return [f = std::move(f)](double x) {
    // Step shrinks toward the endpoints where the profile steepens.
    const double e = 1e-3 * std::min({x, 1.0 - x, 0.3});
    return (-f(x + 2 * e) + 8 * f(x + e) - 8 * f(x - e) + f(x - 2 * e)) / (12 * e);
  };
}

}  // namespace

ThetaProfile ThetaProfile::sqrt_canonical() {
  ThetaProfile p;
  p.theta = [](double x) { return 2.0 * std::sqrt(x * (1.0 - x)); };
  p.theta_prime = [](double x) { return (1.0 - 2.0 * x) / std::sqrt(x * (1.0 - x)); };
  p.certificate = QuadCertificate::kSqrtEndpoint;
  p.symmetric = true;
  return p;
}

ThetaProfile ThetaProfile::constant(double value) {
  if (!(value > 0.0)) throw invalid_argument_error("ThetaProfile: theta must be positive");
  ThetaProfile p;
  p.theta = [value](double) { return value; };
  p.theta_prime = [](double) { return 0.0; };
  p.certificate = QuadCertificate::kSmooth;
  p.symmetric = true;
  return p;
}

ThetaProfile ThetaProfile::from_network_d2(const ReactionNetwork& net,
                                           const MeanFunction& mf) {
  if (net.dim() != 2)
    throw invalid_argument_error("ThetaProfile::from_network_d2: network must have d=2");
  const double a = net.x_stat()[0], b = net.x_stat()[1];
  ThetaProfile p;
  p.theta = [a, b, mf](double x) { return mf.theta(x / a, (1.0 - x) / b); };
  p.theta_prime = fd5_derivative(p.theta);
  switch (mf.kind()) {
    case MeanFunction::Kind::kLogarithmic:
      // theta ~ const/log(1/x) at the endpoints: theta^{-1/2} has a
      // square-root-of-log blowup.
      p.certificate = QuadCertificate::kLogEndpoint;
      break;
    case MeanFunction::Kind::kCustomTheta:
      p.certificate = QuadCertificate::kSqrtEndpoint;
      break;
    case MeanFunction::Kind::kGenericPhi:
      p.certificate = QuadCertificate::kLogEndpoint;
      break;
  }
  p.symmetric = std::abs(a - b) <= 1e-14;
  return p;
}

}  // namespace simplexdiff
