#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "simplexdiff/theta_profile.hpp"

namespace simplexdiff {

// Cell-centered density on [0,1]: x_m = (m + 1/2)/M, sum p_m / M = 1.
struct DensityGrid1D {
  int M = 0;
  Vec values;

  static DensityGrid1D uniform(int M);
  double cell_center(int m) const { return (m + 0.5) / M; }
  double dx() const { return 1.0 / M; }
  double mass() const;
  void normalize();
};

// Potential V with derivative; V enters the dynamics through e^{-V/h}.
struct Potential {
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  static Potential zero();
  static Potential quadratic(double a, double center = 0.5);
};

enum class FpScheme { kEuler, kRk2 };

struct FpOptions {
  double t_end = 1.0;
  double dt = 0.0;  // 0: largest stable step
  std::vector<double> snapshot_times;
  FpScheme scheme = FpScheme::kEuler;
};

struct FpResult {
  DensityGrid1D density;
  std::vector<std::pair<double, DensityGrid1D>> snapshots;
  long clip_count = 0;
};

// Conservative finite volume for
//   dp/dt = h w d_x( sqrt(theta) e^{-V/h} d_x [ p e^{V/h} sqrt(theta) ] )
// with structurally zero flux at both boundary faces. Face coefficients use
// the geometric mean of adjacent cells; the stability bound
// dt <= 0.25 dx^2 / (h w max theta) is enforced.
FpResult solve_fp(const ThetaProfile& theta, const Potential& v, double h, double omega,
                  const DensityGrid1D& p0, const FpOptions& opt);

// pi = e^{-V/h} theta^{-1/2} / Z discretized at cell centers.
DensityGrid1D stationary_density(const ThetaProfile& theta, const Potential& v, double h,
                                 int M);

struct WassersteinCoordinate {
  double Z = 0.0;                     // int_0^1 theta^{-1/2}
  std::function<double(double)> y;    // y(x) = (1/Z) int_0^x theta^{-1/2}
};

WassersteinCoordinate wasserstein_coordinate(const ThetaProfile& theta);

struct GreenFunctionSpec {
  ThetaProfile theta;
  double Z = 0.0;
  std::function<double(double)> y;
  int k_max = 100000;

  static GreenFunctionSpec build(const ThetaProfile& theta, int k_max = 100000);
};

// Cosine-series heat kernel mapped back to the simplex coordinate:
// G(t,x,z) = theta(x)^{-1/2}/Z [1 + 2 sum_k e^{-(k pi/Z)^2 t}
//                                  cos(k pi y(z)) cos(k pi y(x))].
// Terms stop once the exponential factor drops below 1e-14; throws
// TruncationWarning if k_max is hit first.
double green_function(const GreenFunctionSpec& spec, double t, double x, double z);

// p(t,x) = int G(t,x,z) p0(z) dz via the series coefficients.
DensityGrid1D evolve_via_green(const GreenFunctionSpec& spec, const DensityGrid1D& p0,
                               double t);

}  // namespace simplexdiff
