#include "simplexdiff/fokker_planck_1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simplexdiff/errors.hpp"

namespace simplexdiff {

DensityGrid1D DensityGrid1D::uniform(int M) {
  DensityGrid1D g;
  g.M = M;
  g.values.assign(M, 1.0);
  return g;
}

double DensityGrid1D::mass() const {
  double m = 0.0;
  for (double v : values) m += v;
  return m / M;
}

void DensityGrid1D::normalize() {
  const double m = mass();
  if (!(m > 0.0)) throw invalid_argument_error("DensityGrid1D: nonpositive mass");
  for (double& v : values) v /= m;
}

Potential Potential::zero() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }};
}

Potential Potential::quadratic(double a, double center) {
  return {[a, center](double x) { return a * (x - center) * (x - center); },
          [a, center](double x) { return 2.0 * a * (x - center); }};
}

FpResult solve_fp(const ThetaProfile& theta, const Potential& v, double h, double omega,
                  const DensityGrid1D& p0, const FpOptions& opt) {
  const int M = p0.M;
  if (M < 4) throw invalid_argument_error("solve_fp: grid too coarse");
  if (!(h > 0.0) || !(omega > 0.0))
    throw invalid_argument_error("solve_fp: h and omega must be positive");
  const double dx = 1.0 / M;

  Vec th(M), vv(M);
  double th_max = 0.0, v_min = 0.0;
  for (int m = 0; m < M; ++m) {
    const double x = (m + 0.5) / M;
    th[m] = theta.theta(x);
    if (!(th[m] > 0.0)) throw non_integrable_theta("solve_fp: theta <= 0 at cell center");
    th_max = std::max(th_max, th[m]);
    vv[m] = v.value(x);
    v_min = std::min(v_min, vv[m]);
  }

  const double dt_max = 0.25 * dx * dx / (h * omega * th_max);
  double dt = opt.dt;
  if (dt == 0.0)
    dt = dt_max;
  else if (dt > dt_max)
    throw unstable_timestep("solve_fp: dt " + std::to_string(dt) +
                            " exceeds stability bound " + std::to_string(dt_max));

  // q_m = p_m e^{(V-Vmin)/h} sqrt(theta); face coefficient is the geometric
  // mean of sqrt(theta) e^{-(V-Vmin)/h} so the potential shift cancels and
  // pi ~ e^{-V/h} theta^{-1/2} is a discrete fixed point exactly.
  Vec to_q(M), face(M - 1);
  for (int m = 0; m < M; ++m) to_q[m] = std::exp((vv[m] - v_min) / h) * std::sqrt(th[m]);
  for (int m = 0; m + 1 < M; ++m) {
    const double a = std::sqrt(th[m]) * std::exp(-(vv[m] - v_min) / h);
    const double b = std::sqrt(th[m + 1]) * std::exp(-(vv[m + 1] - v_min) / h);
    face[m] = h * omega * std::sqrt(a * b);
  }

  Vec q(M), dp(M), p = p0.values, pmid(M);
  auto rhs = [&](const Vec& pp, Vec& out) {
    for (int m = 0; m < M; ++m) q[m] = pp[m] * to_q[m];
    double flux_left = 0.0;  // zero-flux boundary face
    for (int m = 0; m < M; ++m) {
      const double flux_right = (m + 1 < M) ? face[m] * (q[m + 1] - q[m]) / dx : 0.0;
      out[m] = (flux_right - flux_left) / dx;
      flux_left = flux_right;
    }
  };

  FpResult res;
  std::vector<double> snaps = opt.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  size_t next_snap = 0;
  double t = 0.0;
  while (t < opt.t_end - 1e-15) {
    double step = std::min(dt, opt.t_end - t);
    if (next_snap < snaps.size()) step = std::min(step, snaps[next_snap] - t);
    if (step <= 0.0) {  // snapshot exactly at current time
      DensityGrid1D snap;
      snap.M = M;
      snap.values = p;
      res.snapshots.emplace_back(snaps[next_snap++], std::move(snap));
      continue;
    }
    if (opt.scheme == FpScheme::kEuler) {
      rhs(p, dp);
      for (int m = 0; m < M; ++m) p[m] += step * dp[m];
    } else {
      rhs(p, dp);
      for (int m = 0; m < M; ++m) pmid[m] = p[m] + 0.5 * step * dp[m];
      rhs(pmid, dp);
      for (int m = 0; m < M; ++m) p[m] += step * dp[m];
    }
    for (int m = 0; m < M; ++m)
      if (p[m] < 0.0) {
        if (p[m] < -1e-14) ++res.clip_count;
        p[m] = 0.0;
      }
    t += step;
    if (next_snap < snaps.size() && t >= snaps[next_snap] - 1e-15) {
      DensityGrid1D snap;
      snap.M = M;
      snap.values = p;
      res.snapshots.emplace_back(snaps[next_snap++], std::move(snap));
    }
  }
  res.density.M = M;
  res.density.values = std::move(p);
  return res;
}

DensityGrid1D stationary_density(const ThetaProfile& theta, const Potential& v, double h,
                                 int M) {
  DensityGrid1D g;
  g.M = M;
  g.values.resize(M);
  double v_min = 0.0;
  for (int m = 0; m < M; ++m) v_min = std::min(v_min, v.value((m + 0.5) / M));
  for (int m = 0; m < M; ++m) {
    const double x = (m + 0.5) / M;
    const double th = theta.theta(x);
    if (!(th > 0.0)) throw non_integrable_theta("stationary_density: theta <= 0");
    g.values[m] = std::exp(-(v.value(x) - v_min) / h) / std::sqrt(th);
  }
  g.normalize();
  return g;
}

WassersteinCoordinate wasserstein_coordinate(const ThetaProfile& theta) {
  WassersteinCoordinate wc;
  auto integrand = [theta](double r) {
    const double th = theta.theta(r);
    if (!(th > 0.0)) throw non_integrable_theta("wasserstein_coordinate: theta <= 0");
    return 1.0 / std::sqrt(th);
  };
  wc.Z = quad_singular(integrand, 1.0, theta.certificate);
  const double z = wc.Z;
  const auto cert = theta.certificate;
  wc.y = [integrand, z, cert](double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return quad_singular(integrand, x, cert) / z;
  };
  return wc;
}

GreenFunctionSpec GreenFunctionSpec::build(const ThetaProfile& theta, int k_max) {
  GreenFunctionSpec spec;
  spec.theta = theta;
  WassersteinCoordinate wc = wasserstein_coordinate(theta);
  spec.Z = wc.Z;
  spec.y = wc.y;
  spec.k_max = k_max;
  return spec;
}

namespace {

// Shared series loop: sum_k 2 e^{-(k pi/Z)^2 t} term(k) until the
// exponential factor drops below 1e-14.
template <typename Term>
double cosine_series(const GreenFunctionSpec& spec, double t, Term term) {
  double acc = 0.0;
  for (int k = 1;; ++k) {
    const double rate = k * M_PI / spec.Z;
    const double w = std::exp(-rate * rate * t);
    if (w < 1e-14) break;
    if (k > spec.k_max)
      throw truncation_warning("green_function: series tail above 1e-14 at k_max");
    acc += 2.0 * w * term(k);
  }
  return acc;
}

}  // namespace

double green_function(const GreenFunctionSpec& spec, double t, double x, double z) {
  if (!(t > 0.0)) throw invalid_argument_error("green_function: need t > 0");
  if (!(x > 0.0 && x < 1.0 && z > 0.0 && z < 1.0))
    throw invalid_argument_error("green_function: x, z must lie in (0,1)");
  const double yx = spec.y(x), yz = spec.y(z);
  const double series = cosine_series(
      spec, t, [&](int k) { return std::cos(k * M_PI * yz) * std::cos(k * M_PI * yx); });
  return (1.0 + series) / (spec.Z * std::sqrt(spec.theta.theta(x)));
}

DensityGrid1D evolve_via_green(const GreenFunctionSpec& spec, const DensityGrid1D& p0,
                               double t) {
  if (!(t > 0.0)) throw invalid_argument_error("evolve_via_green: need t > 0");
  const int M = p0.M;
  Vec y(M), pi(M);
  for (int m = 0; m < M; ++m) {
    const double x = (m + 0.5) / M;
    y[m] = spec.y(x);
    pi[m] = 1.0 / (spec.Z * std::sqrt(spec.theta.theta(x)));
  }
  const double dx = 1.0 / M;
  DensityGrid1D out;
  out.M = M;
  out.values.assign(M, p0.mass());  // k = 0 coefficient
  for (int k = 1;; ++k) {
    const double rate = k * M_PI / spec.Z;
    const double w = std::exp(-rate * rate * t);
    if (w < 1e-14) break;
    if (k > spec.k_max)
      throw truncation_warning("evolve_via_green: series tail above 1e-14 at k_max");
    double ck = 0.0;  // 2 int p0(z) cos(k pi y(z)) dz, midpoint rule
    for (int n = 0; n < M; ++n) ck += p0.values[n] * std::cos(k * M_PI * y[n]);
    ck *= 2.0 * dx;
    for (int m = 0; m < M; ++m) out.values[m] += w * ck * std::cos(k * M_PI * y[m]);
  }
  for (int m = 0; m < M; ++m) out.values[m] *= pi[m];
  out.normalize();
  return out;
}

}  // namespace simplexdiff
