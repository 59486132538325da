#include "simplexdiff/wright_fisher.hpp"

#include <algorithm>
#include <cmath>

#include "simplexdiff/errors.hpp"
#include "simplexdiff/histogram.hpp"
#include "simplexdiff/langevin.hpp"
#include "simplexdiff/parallel.hpp"
#include "simplexdiff/special_functions.hpp"

namespace simplexdiff {

WfTransform build_transform(const ThetaProfile& theta) {
  WfTransform tr;
  tr.theta = theta;
  const WassersteinCoordinate wc = wasserstein_coordinate(theta);
  tr.Z = wc.Z;
  tr.gamma = (M_PI / wc.Z) * (M_PI / wc.Z);
  auto y = wc.y;
  tr.psi = [y](double x) {
    const double s = std::sin(0.5 * M_PI * y(x));
    return s * s;
  };
  tr.psi_inverse = [y](double w) {
    if (w <= 0.0) return 0.0;
    if (w >= 1.0) return 1.0;
    // Invert y(x) = (2/pi) asin(sqrt w); y is strictly increasing.
    const double target = 2.0 / M_PI * std::asin(std::sqrt(w));
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
      const double mid = 0.5 * (lo + hi);
      (y(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  return tr;
}

double wf_defining_residual(const WfTransform& tr, double x) {
  if (!(x > 0.0 && x < 1.0))
    throw invalid_argument_error("wf_defining_residual: x must be interior");
  const double e = 1e-3 * std::min({x, 1.0 - x, 0.3});
  auto integrand = [&tr](double r) { return 1.0 / std::sqrt(tr.theta.theta(r)); };
  // w(x + k e) accumulated from local smooth increments so the finite
  // difference is not polluted by independent adaptive refinements.
  double w[5];
  w[2] = tr.Z * (2.0 / M_PI) *
         std::asin(std::sqrt(tr.psi(x)));  // Z y(x) recovered from psi
  w[3] = w[2] + quad_adaptive(integrand, x, x + e, 1e-13);
  w[4] = w[3] + quad_adaptive(integrand, x + e, x + 2 * e, 1e-13);
  w[1] = w[2] - quad_adaptive(integrand, x - e, x, 1e-13);
  w[0] = w[1] - quad_adaptive(integrand, x - 2 * e, x - e, 1e-13);
  const double half_rg = 0.5 * std::sqrt(tr.gamma);
  double psi_v[5];
  for (int k = 0; k < 5; ++k) {
    const double s = std::sin(half_rg * w[k]);
    psi_v[k] = s * s;
  }
  const double psi_prime =
      (-psi_v[4] + 8.0 * psi_v[3] - 8.0 * psi_v[1] + psi_v[0]) / (12.0 * e);
  const double lhs = std::sqrt(2.0 * tr.theta.theta(x)) * psi_prime;
  const double rhs = std::sqrt(2.0 * tr.gamma * psi_v[2] * (1.0 - psi_v[2]));
  return lhs - rhs;
}

namespace {

void validate_wf_args(double gamma, double y0, double t_end, double dt) {
  if (!(gamma > 0.0)) throw invalid_argument_error("simulate_wf: gamma must be positive");
  if (y0 < 0.0 || y0 > 1.0) throw invalid_argument_error("simulate_wf: y0 outside [0,1]");
  if (!(dt > 0.0) || !(t_end >= dt))
    throw invalid_argument_error("simulate_wf: need 0 < dt <= t_end");
}

// Mirror reflection at both endpoints (Feller zero-flux realization).
inline bool fold_into_unit(double& y) {
  if (y >= 0.0 && y <= 1.0) return false;
  do {
    if (y < 0.0) y = -y;
    if (y > 1.0) y = 2.0 - y;
  } while (y < 0.0 || y > 1.0);
  return true;
}

}  // namespace

WfTrajectory simulate_wf(double gamma, double y0, double t_end, double dt,
                         RngStream stream, double noise_scale) {
  validate_wf_args(gamma, y0, t_end, dt);
  const long long n_steps = std::max(1ll, std::llround(t_end / dt));
  const double step = t_end / static_cast<double>(n_steps);

  WfTrajectory traj;
  traj.times.reserve(n_steps + 1);
  traj.y.reserve(n_steps + 1);
  traj.times.push_back(0.0);
  traj.y.push_back(y0);
  double y = y0;
  const double root = std::sqrt(2.0 * gamma * step) * noise_scale;
  for (long long k = 1; k <= n_steps; ++k) {
    const double var = std::max(y * (1.0 - y), 0.0);
    y += gamma * (0.5 - y) * step + root * std::sqrt(var) * stream.normal();
    if (fold_into_unit(y)) ++traj.reflection_count;
    traj.times.push_back(k * step);
    traj.y.push_back(y);
  }
  return traj;
}

double simulate_wf_final(double gamma, double y0, double t_end, double dt,
                         RngStream stream, double noise_scale) {
  validate_wf_args(gamma, y0, t_end, dt);
  const long long n_steps = std::max(1ll, std::llround(t_end / dt));
  const double step = t_end / static_cast<double>(n_steps);
  double y = y0;
  const double root = std::sqrt(2.0 * gamma * step) * noise_scale;
  for (long long k = 0; k < n_steps; ++k) {
    const double var = std::max(y * (1.0 - y), 0.0);
    y += gamma * (0.5 - y) * step + root * std::sqrt(var) * stream.normal();
    fold_into_unit(y);
  }
  return y;
}

PushforwardReport pushforward_check(const ThetaProfile& theta, const WfTransform& tr,
                                    double x0, int n_paths, double t, double dt,
                                    uint64_t seed, int threads) {
  if (!(x0 > 0.0 && x0 < 1.0))
    throw invalid_argument_error("pushforward_check: x0 must be interior");

  // Canonical two-point diffusion: omega h = 1, zero potential, the given
  // theta expressed as a zero-homogeneous mean theta(s,t) = profile(s/(s+t)).
  QMatrix q = QMatrix::from_rows({{-2.0, 2.0}, {2.0, -2.0}});  // omega = 1
  ReactionNetwork net = ReactionNetwork::build(q);
  auto profile_fn = theta.theta;
  MeanFunction mf = MeanFunction::custom_theta(
      [profile_fn](double s, double t) { return profile_fn(s / (s + t)); });

  EnsembleConfig ec;
  ec.base.h = 1.0;
  ec.base.dt = dt;
  ec.base.t_end = t;
  ec.base.noise_form = NoiseForm::kEigen;
  ec.base.reflection = true;
  ec.base.seed = seed;
  ec.n_paths = n_paths;
  ec.snapshot_times = {t};
  ec.threads = threads;
  const EnsembleResult ens =
      simulate_ensemble(net, mf, SimplexState::create({x0, 1.0 - x0}), ec);

  Vec pushed(n_paths);
  for (int p = 0; p < n_paths; ++p) pushed[p] = tr.psi(ens.sample(p, 0, 0));

  const double y0 = tr.psi(x0);
  Vec wf_samples(n_paths);
  auto worker = [&](int lo, int hi) {
    for (int p = lo; p < hi; ++p)
      wf_samples[p] = simulate_wf_final(
          tr.gamma, y0, t, dt,
          RngStream(seed, rng_tags::kWrightFisher, static_cast<uint64_t>(p)));
  };
  parallel_chunks(n_paths, threads, worker);

  PushforwardReport rep;
  rep.n_paths = n_paths;
  rep.ks_statistic = ks_two_sample(pushed, wf_samples);
  rep.ks_critical = ks_critical_two_sample(n_paths, n_paths);
  rep.pass = rep.ks_statistic < rep.ks_critical;
  return rep;
}

}  // namespace simplexdiff
