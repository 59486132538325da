#pragma once

#include <cstdint>
#include <functional>

#include "simplexdiff/rng.hpp"
#include "simplexdiff/theta_profile.hpp"

namespace simplexdiff {

// Change of variables converting the canonical two-point diffusion to the
// Wright-Fisher process: B(psi(x),1/2,1/2) = sqrt(gamma) int_0^x theta^{-1/2}
// with sqrt(gamma) = B(1/2,1/2)/Z. Since B(y,1/2,1/2) = 2 asin(sqrt y) the
// closed form is psi(x) = sin^2((sqrt(gamma)/2) int_0^x theta^{-1/2}).
struct WfTransform {
  std::function<double(double)> psi;
  std::function<double(double)> psi_inverse;  // bisection on the closed form
  double gamma = 0.0;                         // (pi/Z)^2
  double Z = 0.0;
  ThetaProfile theta;
};

WfTransform build_transform(const ThetaProfile& theta);

// Residual of the defining relation sqrt(2 theta) psi' - sqrt(2 gamma psi(1-psi))
// with psi' from a 5-point central difference (local quadrature increments,
// step scaled toward the endpoints).
double wf_defining_residual(const WfTransform& tr, double x);

struct WfTrajectory {
  Vec times;
  Vec y;
  long long reflection_count = 0;
};

// Euler-Maruyama for dY = gamma(1/2 - Y)dt + sqrt(2 gamma Y(1-Y)) dB with
// mirror reflection at 0 and 1.
WfTrajectory simulate_wf(double gamma, double y0, double t_end, double dt,
                         RngStream stream, double noise_scale = 1.0);

// Same scheme without trajectory storage; returns Y(t_end).
double simulate_wf_final(double gamma, double y0, double t_end, double dt,
                         RngStream stream, double noise_scale = 1.0);

struct PushforwardReport {
  double ks_statistic = 0.0;
  double ks_critical = 0.0;  // two-sample, 1% level
  int n_paths = 0;
  bool pass = false;
};

// Lemma-level check: simulate the canonical two-point diffusion X (omega h = 1,
// zero potential, the given theta) and the Wright-Fisher process Y from
// y0 = psi(x0); compare psi(X_t) and Y_t samples by a two-sample KS test.
PushforwardReport pushforward_check(const ThetaProfile& theta, const WfTransform& tr,
                                    double x0, int n_paths, double t, double dt,
                                    uint64_t seed, int threads = 1);

}  // namespace simplexdiff
