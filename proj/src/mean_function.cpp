#include "simplexdiff/mean_function.hpp"

#include <cmath>

#include "simplexdiff/errors.hpp"
#include "simplexdiff/special_functions.hpp"

namespace simplexdiff {

MeanFunction MeanFunction::kl() { return MeanFunction(Kind::kLogarithmic); }

MeanFunction MeanFunction::from_phi(std::function<double(double)> phi,
                                    std::function<double(double)> phi_prime,
                                    std::function<double(double)> phi_double_prime) {
  MeanFunction mf(Kind::kGenericPhi);
  mf.phi_ = std::move(phi);
  mf.phi_prime_ = std::move(phi_prime);
  mf.phi_double_prime_ = std::move(phi_double_prime);
  return mf;
}

MeanFunction MeanFunction::geometric() {
  return custom_theta([](double s, double t) { return std::sqrt(s * t); });
}

MeanFunction MeanFunction::custom_theta(std::function<double(double, double)> theta) {
  MeanFunction mf(Kind::kCustomTheta);
  mf.theta_ = std::move(theta);
  return mf;
}

double MeanFunction::theta(double s, double t) const {
  if (!(s > 0.0) || !(t > 0.0))
    throw invalid_argument_error("MeanFunction::theta: arguments must be positive");
  switch (kind_) {
    case Kind::kLogarithmic:
      return log_mean(s, t);
    case Kind::kGenericPhi:
      if (std::abs(s - t) <= 1e-9 * std::max(s, t))
        return 1.0 / phi_double_prime_(0.5 * (s + t));
      return (s - t) / (phi_prime_(s) - phi_prime_(t));
    case Kind::kCustomTheta:
      return theta_(s, t);
  }
  throw invalid_argument_error("MeanFunction::theta: bad kind");
}

double MeanFunction::phi(double u) const {
  switch (kind_) {
    case Kind::kLogarithmic:
      return u > 0.0 ? u * std::log(u) - u + 1.0 : 1.0;
    case Kind::kGenericPhi:
      return phi_(u);
    case Kind::kCustomTheta:
      return 0.0;
  }
  return 0.0;
}

double MeanFunction::phi_prime(double u) const {
  switch (kind_) {
    case Kind::kLogarithmic:
      if (!(u > 0.0))
        throw boundary_singular("KL gradient log(u) diverges at u = 0");
      return std::log(u);
    case Kind::kGenericPhi:
      return phi_prime_(u);
    case Kind::kCustomTheta:
      return 0.0;
  }
  return 0.0;
}

double MeanFunction::phi_double_prime(double u) const {
  switch (kind_) {
    case Kind::kLogarithmic:
      if (!(u > 0.0)) throw boundary_singular("KL phi'' diverges at u = 0");
      return 1.0 / u;
    case Kind::kGenericPhi:
      return phi_double_prime_(u);
    case Kind::kCustomTheta:
      return 0.0;
  }
  return 0.0;
}

}  // namespace simplexdiff
