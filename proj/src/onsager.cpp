#include "simplexdiff/onsager.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simplexdiff/errors.hpp"
#include "simplexdiff/special_functions.hpp"

namespace simplexdiff {

namespace {

void require_interior(const SimplexState& x, const char* where) {
  if (!x.interior()) throw boundary_singular(std::string(where) + ": x on simplex boundary");
}

void require_detailed_balance(const ReactionNetwork& net, const char* where) {
  if (!net.detailed_balanced())
    throw not_detailed_balanced(std::string(where) + ": network lacks detailed balance");
}

double fd_step(const SimplexState& x) {
  return std::min(1e-6, 0.25 * x.interior_margin);
}

}  // namespace

Mat onsager_matrix(const ReactionNetwork& net, const MeanFunction& mf, const Vec& x) {
  const int d = net.dim();
  const Vec& xs = net.x_stat();
  Mat k(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double w = net.omega()(i, j);
      if (w == 0.0) continue;
      const double v = -w * mf.theta(x[i] / xs[i], x[j] / xs[j]);
      k(i, j) = v;
      k(j, i) = v;
    }
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (int j = 0; j < d; ++j)
      if (j != i) s += k(i, j);
    k(i, i) = -s;
  }
  return k;
}

OnsagerDecomposition build_onsager(const ReactionNetwork& net, const MeanFunction& mf,
                                   const SimplexState& x) {
  require_interior(x, "build_onsager");
  require_detailed_balance(net, "build_onsager");
  const int d = net.dim();
  OnsagerDecomposition dec;
  dec.K = onsager_matrix(net, mf, x.x);
  SymEig eig = jacobi_eigen(dec.K);
  const double lmax = std::max(eig.values[0], 1e-300);
  if (std::abs(eig.values[d - 1]) > 1e-10 * lmax)
    throw Error("EigenStructure", "null eigenvalue of K not resolved");
  dec.lambdas.assign(eig.values.begin(), eig.values.end() - 1);
  dec.eigvecs = Mat(d, d - 1);
  for (int l = 0; l < d - 1; ++l) {
    int first = 0;
    while (first < d && std::abs(eig.vectors(first, l)) <= 1e-12) ++first;
    const double sign = (first < d && eig.vectors(first, l) < 0.0) ? -1.0 : 1.0;
    for (int i = 0; i < d; ++i) dec.eigvecs(i, l) = sign * eig.vectors(i, l);
  }
  dec.e.assign(d, 1.0 / std::sqrt(static_cast<double>(d)));
  dec.sigma = Mat(d, d - 1);
  for (int l = 0; l < d - 1; ++l) {
    if (!(dec.lambdas[l] > 0.0))
      throw boundary_singular("build_onsager: nonpositive eigenvalue " +
                              std::to_string(dec.lambdas[l]));
    const double root = std::sqrt(dec.lambdas[l]);
    for (int i = 0; i < d; ++i) dec.sigma(i, l) = root * dec.eigvecs(i, l);
  }
  return dec;
}

Mat build_onsager_general(const std::vector<GeneralReaction>& reactions) {
  if (reactions.empty())
    throw invalid_argument_error("build_onsager_general: no reactions");
  const int d = static_cast<int>(reactions.front().nu.size());
  Mat k(d, d);
  for (const auto& r : reactions) {
    if (static_cast<int>(r.nu.size()) != d)
      throw invalid_argument_error("build_onsager_general: inconsistent nu length");
    if (!(r.rate_forward > 0.0) || !(r.rate_backward > 0.0))
      throw invalid_argument_error("build_onsager_general: nonpositive rate");
    const double lam = log_mean(r.rate_forward, r.rate_backward);
    for (int i = 0; i < d; ++i) {
      if (r.nu[i] == 0) continue;
      for (int j = 0; j < d; ++j)
        k(i, j) += lam * r.nu[i] * r.nu[j];
    }
  }
  return k;
}

FreeEnergyResult free_energy(const ReactionNetwork& net, const MeanFunction& mf,
                             const SimplexState& x) {
  const int d = net.dim();
  FreeEnergyResult out;
  out.gradient.assign(d, 0.0);
  out.value = 0.0;
  if (!mf.has_potential()) return out;  // canonical case: zero potential
  require_interior(x, "free_energy");
  const Vec& xs = net.x_stat();
  for (int i = 0; i < d; ++i) {
    const double s = x.x[i] / xs[i];
    out.value += mf.phi(s) * xs[i];
    out.gradient[i] = mf.phi_prime(s);
  }
  return out;
}

MetricData metric_tensor(const OnsagerDecomposition& dec) {
  const int d = dec.K.rows();
  for (double l : dec.lambdas)
    if (l < 1e-12)
      throw Error("NearSingularEigenvalue",
                  "metric_tensor: eigenvalue " + std::to_string(l) + " below 1e-12");
  MetricData m;
  m.g = Mat(d - 1, d - 1);
  for (int i = 0; i < d - 1; ++i)
    for (int j = 0; j < d - 1; ++j) {
      double s = 0.0;
      for (int l = 0; l < d - 1; ++l)
        s += (dec.eigvecs(i, l) - dec.eigvecs(d - 1, l)) *
             (dec.eigvecs(j, l) - dec.eigvecs(d - 1, l)) / dec.lambdas[l];
      m.g(i, j) = s;
    }
  m.g_inv = Mat(d - 1, d - 1);
  for (int i = 0; i < d - 1; ++i)
    for (int j = 0; j < d - 1; ++j) m.g_inv(i, j) = dec.K(i, j);
  m.det_g = lu_det(m.g);
  m.vol_density = std::sqrt(m.det_g) / std::sqrt(static_cast<double>(d));
  return m;
}

double log_det_metric(const ReactionNetwork& net, const MeanFunction& mf, const Vec& x) {
  const int d = net.dim();
  Mat a = onsager_matrix(net, mf, x);
  const double inv_d = 1.0 / d;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) += inv_d;  // K + e e^T has det = prod lambda
  const double prod = lu_det(a);
  if (!(prod > 0.0))
    throw boundary_singular("log_det_metric: eigenvalue product not positive");
  return std::log(static_cast<double>(d)) - std::log(prod);
}

Vec grad_log_det_metric(const ReactionNetwork& net, const MeanFunction& mf,
                        const SimplexState& x) {
  require_interior(x, "grad_log_det_metric");
  const int d = net.dim();
  const double eps = fd_step(x);
  Vec grad(d, 0.0);
  Vec xp = x.x, xm = x.x;
  for (int i = 0; i < d - 1; ++i) {
    xp[i] += eps; xp[d - 1] -= eps;
    xm[i] -= eps; xm[d - 1] += eps;
    grad[i] = (log_det_metric(net, mf, xp) - log_det_metric(net, mf, xm)) / (2.0 * eps);
    xp = x.x;
    xm = x.x;
  }
  return grad;
}

Vec onsager_divergence(const ReactionNetwork& net, const MeanFunction& mf,
                       const SimplexState& x) {
  require_interior(x, "onsager_divergence");
  const int d = net.dim();
  const double eps = fd_step(x);
  Vec div(d, 0.0);
  Vec xp = x.x, xm = x.x;
  for (int j = 0; j < d - 1; ++j) {
    xp[j] += eps; xp[d - 1] -= eps;
    xm[j] -= eps; xm[d - 1] += eps;
    const Mat kp = onsager_matrix(net, mf, xp);
    const Mat km = onsager_matrix(net, mf, xm);
    for (int i = 0; i < d; ++i) div[i] += (kp(i, j) - km(i, j)) / (2.0 * eps);
    xp = x.x;
    xm = x.x;
  }
  return div;
}

DifferentialOps differential_operators(const ReactionNetwork& net, const MeanFunction& mf,
                                       const ScalarField& f, const SimplexState& x) {
  require_interior(x, "differential_operators");
  const int d = net.dim();
  DifferentialOps out;
  const Mat k = onsager_matrix(net, mf, x.x);
  const Vec gf = f.gradient(x.x);
  out.grad_g = mat_vec(k, gf);
  out.dirichlet_density = 0.0;
  for (int i = 0; i < d; ++i) out.dirichlet_density += gf[i] * out.grad_g[i];

  // Conservative chart form: flux_i = sqrt|g| (K grad f)_i for the first
  // d-1 coordinates, differenced along tangent directions e_i - e_d.
  const double eps = fd_step(x);
  auto flux = [&](const Vec& xx, int i) {
    const Mat kk = onsager_matrix(net, mf, xx);
    const Vec g2 = f.gradient(xx);
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += kk(i, j) * g2[j];
    return std::exp(0.5 * log_det_metric(net, mf, xx)) * s;
  };
  double div = 0.0;
  Vec xp = x.x, xm = x.x;
  for (int i = 0; i < d - 1; ++i) {
    xp[i] += eps; xp[d - 1] -= eps;
    xm[i] -= eps; xm[d - 1] += eps;
    div += (flux(xp, i) - flux(xm, i)) / (2.0 * eps);
    xp = x.x;
    xm = x.x;
  }
  out.laplace_beltrami = div * std::exp(-0.5 * log_det_metric(net, mf, x.x));
  return out;
}

double apply_generator(const ReactionNetwork& net, const MeanFunction& mf,
                       const ScalarField& f, const SimplexState& x, double h) {
  const DifferentialOps ops = differential_operators(net, mf, f, x);
  const FreeEnergyResult fe = free_energy(net, mf, x);
  double drift = 0.0;
  for (int i = 0; i < net.dim(); ++i) drift += fe.gradient[i] * ops.grad_g[i];
  return -drift + h * ops.laplace_beltrami;
}

double hje_residual(const ReactionNetwork& net,
                    const std::function<Vec(const Vec&)>& psi_gradient,
                    const SimplexState& x) {
  const Vec g = psi_gradient(x.x);
  double r = 0.0;
  for (const auto& [i, j] : net.edges()) {
    const double qij = net.q().entries(i, j);
    const double qji = net.q().entries(j, i);
    r += qji * x.x[j] * std::exp(g[i] - g[j]) - qij * x.x[i];
  }
  return r;
}

Trajectory solve_gradient_flow(const ReactionNetwork& net, const MeanFunction& mf,
                               const SimplexState& x0, double t_end, double dt) {
  require_interior(x0, "solve_gradient_flow");
  require_detailed_balance(net, "solve_gradient_flow");
  const int d = net.dim();
  const Vec& xs = net.x_stat();

  auto velocity = [&](const Vec& x, Vec& v) -> bool {
    for (double xi : x)
      if (!(xi > 0.0)) return false;  // stage left the open simplex
    const Mat k = onsager_matrix(net, mf, x);
    Vec grad(d, 0.0);
    if (mf.has_potential())
      for (int i = 0; i < d; ++i) grad[i] = mf.phi_prime(x[i] / xs[i]);
    v = mat_vec(k, grad);
    for (double& vi : v) vi = -vi;
    return true;
  };

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(x0.x);
  Vec x = x0.x;
  double t = 0.0;
  Vec k1(d), k2(d), k3(d), k4(d), stage(d), xn(d);
  while (t < t_end - 1e-15) {
    double step = std::min(dt, t_end - t);
    int halvings = 0;
    for (;;) {
      bool ok = velocity(x, k1);
      if (ok) {
        for (int i = 0; i < d; ++i) stage[i] = x[i] + 0.5 * step * k1[i];
        ok = velocity(stage, k2);
      }
      if (ok) {
        for (int i = 0; i < d; ++i) stage[i] = x[i] + 0.5 * step * k2[i];
        ok = velocity(stage, k3);
      }
      if (ok) {
        for (int i = 0; i < d; ++i) stage[i] = x[i] + step * k3[i];
        ok = velocity(stage, k4);
      }
      if (ok) {
        for (int i = 0; i < d; ++i)
          xn[i] = x[i] + step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        for (int i = 0; i < d; ++i)
          if (!(xn[i] > 0.0)) ok = false;
      }
      if (ok) break;
      if (++halvings > 40)
        throw step_left_simplex("solve_gradient_flow: step rejected 40 times at t = " +
                                std::to_string(t));
      step *= 0.5;
    }
    x = xn;
    t += step;
    traj.times.push_back(t);
    traj.states.push_back(x);
  }
  return traj;
}

double wasserstein2_twopoint(const ThetaProfile& profile, double x) {
  if (x < 0.0 || x > 1.0)
    throw invalid_argument_error("wasserstein2_twopoint: x outside [0,1]");
  auto integrand = [&profile](double r) {
    const double th = profile.theta(r);
    if (!(th > 0.0)) throw non_integrable_theta("theta nonpositive inside (0,1)");
    return 1.0 / std::sqrt(th);
  };
  return quad_singular(integrand, x, profile.certificate);
}

}  // namespace simplexdiff
