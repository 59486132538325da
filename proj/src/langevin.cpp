#include "simplexdiff/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simplexdiff/errors.hpp"
#include "simplexdiff/parallel.hpp"
#include "simplexdiff/rng.hpp"

namespace simplexdiff {

void SdeConfig::validate() const {
  if (!(h >= 0.0)) throw invalid_argument_error("SdeConfig: h must be >= 0");
  if (!(dt > 0.0)) throw invalid_argument_error("SdeConfig: dt must be positive");
  if (!(t_end >= dt)) throw invalid_argument_error("SdeConfig: need dt <= t_end");
  if (record_stride < 1) throw invalid_argument_error("SdeConfig: record_stride < 1");
  if (noise_scale < 0.0) throw invalid_argument_error("SdeConfig: negative noise_scale");
}

EffectivePotential effective_potential(const ReactionNetwork& net, const MeanFunction& mf,
                                       const SimplexState& x, double h) {
  const FreeEnergyResult fe = free_energy(net, mf, x);
  EffectivePotential out;
  out.value = fe.value;
  out.gradient = fe.gradient;
  if (h != 0.0) {
    out.value -= 0.5 * h * log_det_metric(net, mf, x.x);
    // grad log|g| = -grad log(prod lambda); only the tangential part enters.
    const Vec glp = grad_log_det_metric(net, mf, x);
    for (size_t i = 0; i < out.gradient.size(); ++i)
      out.gradient[i] -= 0.5 * h * glp[i];
  }
  return out;
}

namespace {

// Largest drift move allowed in one step (per coordinate).
constexpr double kDriftCap = 0.25;

// One Euler-Maruyama path with all work buffers preallocated. The Onsager
// matrix, its finite-difference derivatives and the noise factor are
// rebuilt at every step (sigma optionally frozen at step 0).
class SdeStepper {
 public:
  SdeStepper(const ReactionNetwork& net, const MeanFunction& mf, const SdeConfig& cfg,
             RngStream stream)
      : net_(net), mf_(mf), cfg_(cfg), stream_(std::move(stream)), d_(net.dim()) {
    const size_t dd = static_cast<size_t>(d_) * d_;
    k_.resize(dd);
    kp_.resize(dd);
    km_.resize(dd);
    work_.resize(dd);
    scratch_.resize(dd);
    eigvec_.resize(dd);
    grad_.assign(d_, 0.0);
    drift_.assign(d_, 0.0);
    noise_.assign(d_, 0.0);
    div_k_.assign(d_, 0.0);
    xp_.assign(d_, 0.0);
    xm_.assign(d_, 0.0);
    piv_.assign(d_, 0);
    flag_.assign(d_, 0);
    sigma_.resize(dd);
    lam_.assign(d_, 0.0);
    // Edge list of strictly positive weights (upper triangle).
    for (int i = 0; i < d_; ++i)
      for (int j = i + 1; j < d_; ++j)
        if (net.omega()(i, j) != 0.0) pairs_.emplace_back(i, j);
  }

  long long reflections() const { return reflections_; }

  // Advances x by one step of size dt; throws StepLeftSimplex when the
  // proposal exits and reflection is off.
  void step(Vec& x, double dt) {
    build_k(x, k_.data());

    // grad psi_hat = phi'(x/xs) + (h/2) grad log prod(lambda)
    if (mf_.has_potential())
      for (int i = 0; i < d_; ++i) grad_[i] = mf_.phi_prime(x[i] / net_.x_stat()[i]);
    else
      std::fill(grad_.begin(), grad_.end(), 0.0);

    std::fill(div_k_.begin(), div_k_.end(), 0.0);
    double margin = 1.0;
    for (double xi : x) margin = std::min(margin, xi);
    // Both h-order drift pieces vanish at h = 0; the finite differences are
    // skipped on an exact boundary hit (degenerate K, measure-zero event).
    if (cfg_.h != 0.0 && margin > 1e-14) {
      const double eps = std::min(1e-6, 0.45 * margin);
      for (int j = 0; j < d_ - 1; ++j) {
        std::copy(x.begin(), x.end(), xp_.begin());
        std::copy(x.begin(), x.end(), xm_.begin());
        xp_[j] += eps;
        xp_[d_ - 1] -= eps;
        xm_[j] -= eps;
        xm_[d_ - 1] += eps;
        build_k(xp_, kp_.data());
        build_k(xm_, km_.data());
        for (int i = 0; i < d_; ++i)
          div_k_[i] += (kp_[i * d_ + j] - km_[i * d_ + j]) / (2.0 * eps);
        // grad log prod(lambda): one log of the determinant ratio.
        const double dlp =
            std::log(lambda_product(kp_.data()) / lambda_product(km_.data())) /
            (2.0 * eps);
        grad_[j] += 0.5 * cfg_.h * dlp;
      }
    }

    for (int i = 0; i < d_; ++i) {
      double s = 0.0;
      for (int j = 0; j < d_; ++j) s -= k_[i * d_ + j] * grad_[j];
      if (cfg_.divergence_term) s += cfg_.h * div_k_[i];
      drift_[i] = s;
    }

    const double amp = cfg_.noise_scale * std::sqrt(2.0 * cfg_.h * dt);
    std::fill(noise_.begin(), noise_.end(), 0.0);
    if (amp != 0.0) {
      if (cfg_.noise_form == NoiseForm::kEigen) {
        if (!cfg_.freeze_sigma || !sigma_ready_) {
          decompose_sigma();
          sigma_ready_ = true;
        }
        for (int l = 0; l < d_ - 1; ++l) {
          const double xi = stream_.normal();
          for (int i = 0; i < d_; ++i) noise_[i] += sigma_[i * d_ + l] * xi;
        }
      } else {
        for (const auto& [i, j] : pairs_) {
          const double b = std::sqrt(std::abs(k_[i * d_ + j])) * stream_.normal();
          noise_[i] += b;
          noise_[j] -= b;
        }
      }
    }

    // Tamed increment: the inward drift ~ theta'(x) is unbounded at the
    // degenerate boundary and an uncapped Euler step can overshoot the
    // whole simplex. The cap only engages within O(dt^2) of the boundary.
    double dmax = 0.0;
    for (int i = 0; i < d_; ++i) dmax = std::max(dmax, std::abs(dt * drift_[i]));
    const double tame = (dmax > kDriftCap) ? kDriftCap / dmax : 1.0;

    bool left = false;
    for (int i = 0; i < d_; ++i) {
      x[i] += tame * dt * drift_[i] + amp * noise_[i];
      if (x[i] < 0.0) left = true;
    }
    if (left) {
      if (!cfg_.reflection)
        throw step_left_simplex("simulate_sde: proposal left the simplex");
      reflect(x);
      ++reflections_;
    }
  }

 private:
  void build_k(const Vec& x, double* k) const {
    const Vec& xs = net_.x_stat();
    std::fill(k, k + static_cast<size_t>(d_) * d_, 0.0);
    for (const auto& [i, j] : pairs_) {
      const double v =
          -net_.omega()(i, j) * mf_.theta(x[i] / xs[i], x[j] / xs[j]);
      k[i * d_ + j] = v;
      k[j * d_ + i] = v;
    }
    for (int i = 0; i < d_; ++i) {
      double s = 0.0;
      for (int j = 0; j < d_; ++j)
        if (j != i) s += k[i * d_ + j];
      k[i * d_ + i] = -s;
    }
  }

  // prod(lambda_l) = det(K + e e^T); closed forms for d <= 3, LU otherwise.
  double lambda_product(const double* k) {
    const double inv_d = 1.0 / d_;
    if (d_ == 2) return 2.0 * k[0];
    if (d_ == 3) {
      const double a = k[0] + inv_d, b = k[1] + inv_d, c = k[2] + inv_d;
      const double e = k[4] + inv_d, f = k[5] + inv_d, i = k[8] + inv_d;
      return a * (e * i - f * f) - b * (b * i - c * f) + c * (b * f - c * e);
    }
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) work_[i * d_ + j] = k[i * d_ + j] + inv_d;
    double det = 1.0;
    for (int c = 0; c < d_; ++c) {
      int p = c;
      double best = std::abs(work_[c * d_ + c]);
      for (int r = c + 1; r < d_; ++r)
        if (std::abs(work_[r * d_ + c]) > best) {
          best = std::abs(work_[r * d_ + c]);
          p = r;
        }
      if (best == 0.0) throw boundary_singular("sde: degenerate K eigenvalue product");
      if (p != c) {
        for (int j = 0; j < d_; ++j) std::swap(work_[p * d_ + j], work_[c * d_ + j]);
        det = -det;
      }
      const double pivot = work_[c * d_ + c];
      det *= pivot;
      for (int r = c + 1; r < d_; ++r) {
        const double m = work_[r * d_ + c] / pivot;
        for (int j = c + 1; j < d_; ++j) work_[r * d_ + j] -= m * work_[c * d_ + j];
      }
    }
    return det;
  }

  void decompose_sigma() {
    if (d_ == 2) {
      const double root = std::sqrt(k_[0]);  // lambda = 2k, u = (1,-1)/sqrt 2
      sigma_[0] = root;
      sigma_[2] = -root;
      return;
    }
    // Cyclic Jacobi, warm-started from the previous step's rotation: K(x)
    // moves O(dt) per step, so one sweep usually suffices after the first.
    const size_t dd = static_cast<size_t>(d_) * d_;
    if (!warm_) {
      std::fill(eigvec_.begin(), eigvec_.end(), 0.0);
      for (int i = 0; i < d_; ++i) eigvec_[i * d_ + i] = 1.0;
      std::copy(k_.data(), k_.data() + dd, work_.begin());
    } else {
      // work = V^T K V with the previous eigenvector matrix V.
      for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) {
          double s = 0.0;
          for (int l = 0; l < d_; ++l) s += k_[i * d_ + l] * eigvec_[l * d_ + j];
          scratch_[i * d_ + j] = s;
        }
      for (int i = 0; i < d_; ++i)
        for (int j = i; j < d_; ++j) {
          double s = 0.0;
          for (int l = 0; l < d_; ++l) s += eigvec_[l * d_ + i] * scratch_[l * d_ + j];
          work_[i * d_ + j] = s;
          work_[j * d_ + i] = s;
        }
    }
    double scale = 0.0;
    for (int i = 0; i < d_; ++i) scale += work_[i * d_ + i] * work_[i * d_ + i];
    const double off_tol = 1e-24 * std::max(scale, 1e-300);
    for (int sweep = 0; sweep < 64; ++sweep) {
      double off = 0.0;
      for (int p = 0; p < d_; ++p)
        for (int q = p + 1; q < d_; ++q) off += work_[p * d_ + q] * work_[p * d_ + q];
      if (off <= off_tol) break;
      for (int p = 0; p < d_; ++p)
        for (int q = p + 1; q < d_; ++q) {
          const double apq = work_[p * d_ + q];
          if (std::abs(apq) <= 1e-300) continue;
          const double tau = (work_[q * d_ + q] - work_[p * d_ + p]) / (2.0 * apq);
          const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                        : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const double s = t * c;
          for (int r = 0; r < d_; ++r) {
            const double akp = work_[r * d_ + p], akq = work_[r * d_ + q];
            work_[r * d_ + p] = c * akp - s * akq;
            work_[r * d_ + q] = s * akp + c * akq;
          }
          for (int r = 0; r < d_; ++r) {
            const double apk = work_[p * d_ + r], aqk = work_[q * d_ + r];
            work_[p * d_ + r] = c * apk - s * aqk;
            work_[q * d_ + r] = s * apk + c * aqk;
          }
          for (int r = 0; r < d_; ++r) {
            const double vkp = eigvec_[r * d_ + p], vkq = eigvec_[r * d_ + q];
            eigvec_[r * d_ + p] = c * vkp - s * vkq;
            eigvec_[r * d_ + q] = s * vkp + c * vkq;
          }
        }
    }
    warm_ = true;
    for (int l = 0; l < d_; ++l) lam_[l] = work_[l * d_ + l];
    // Columns with the d-1 largest eigenvalues (insertion order, no heap).
    std::vector<int>& order = piv_;
    for (int i = 0; i < d_; ++i) order[i] = i;
    for (int i = 1; i < d_; ++i) {
      const int key = order[i];
      int j = i - 1;
      while (j >= 0 && lam_[order[j]] < lam_[key]) {
        order[j + 1] = order[j];
        --j;
      }
      order[j + 1] = key;
    }
    for (int l = 0; l < d_ - 1; ++l) {
      const int src = order[l];
      const double root = std::sqrt(std::max(lam_[src], 0.0));
      for (int i = 0; i < d_; ++i) sigma_[i * d_ + l] = root * eigvec_[i * d_ + src];
    }
  }

  // Flip negative coordinates and rescale the rest so the sum stays 1.
  // Exact mirror reflection at 0 and 1 when d = 2; a documented heuristic
  // for d >= 3 where no pathwise construction is singled out.
  void reflect(Vec& x) {
    double flipped_sum = 0.0, other_sum = 0.0;
    for (int i = 0; i < d_; ++i) {
      if (x[i] < 0.0) {
        x[i] = -x[i];
        flag_[i] = 1;
        flipped_sum += x[i];
      } else {
        flag_[i] = 0;
        other_sum += x[i];
      }
    }
    if (!(flipped_sum < 1.0) || !(other_sum > 0.0))
      throw step_left_simplex("simulate_sde: reflection failed (overshoot too large)");
    const double scale = (1.0 - flipped_sum) / other_sum;
    for (int i = 0; i < d_; ++i)
      if (!flag_[i]) x[i] *= scale;
  }

  const ReactionNetwork& net_;
  const MeanFunction& mf_;
  const SdeConfig& cfg_;
  RngStream stream_;
  const int d_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<double> k_, kp_, km_, work_, scratch_, eigvec_, sigma_;
  Vec grad_, drift_, noise_, div_k_, xp_, xm_, lam_;
  std::vector<int> piv_;
  std::vector<char> flag_;
  bool sigma_ready_ = false;
  bool warm_ = false;
  long long reflections_ = 0;
};

}  // namespace

SdeTrajectory simulate_sde(const ReactionNetwork& net, const MeanFunction& mf,
                           const SimplexState& x0, const SdeConfig& cfg) {
  cfg.validate();
  if (!x0.interior()) throw boundary_singular("simulate_sde: x0 on boundary");
  const long long n_steps = std::max(1ll, std::llround(cfg.t_end / cfg.dt));
  const double dt = cfg.t_end / static_cast<double>(n_steps);

  SdeStepper stepper(net, mf, cfg,
                     RngStream(cfg.seed, rng_tags::kSde, cfg.stream_index));
  SdeTrajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(x0.x);
  Vec x = x0.x;
  for (long long k = 1; k <= n_steps; ++k) {
    stepper.step(x, dt);
    if (k % cfg.record_stride == 0 || k == n_steps) {
      traj.times.push_back(k * dt);
      traj.states.push_back(x);
    }
  }
  traj.reflection_count = stepper.reflections();
  return traj;
}

EnsembleResult simulate_ensemble(const ReactionNetwork& net, const MeanFunction& mf,
                                 const SimplexState& x0, const EnsembleConfig& cfg) {
  cfg.base.validate();
  if (cfg.n_paths < 1) throw invalid_argument_error("simulate_ensemble: n_paths < 1");
  const int d = net.dim();
  const long long n_steps = std::max(1ll, std::llround(cfg.base.t_end / cfg.base.dt));
  const double dt = cfg.base.t_end / static_cast<double>(n_steps);

  std::vector<double> snaps = cfg.snapshot_times;
  if (snaps.empty()) snaps.push_back(cfg.base.t_end);
  std::sort(snaps.begin(), snaps.end());
  std::vector<long long> snap_steps;
  for (double t : snaps) {
    const long long k = std::llround(t / dt);
    if (std::abs(k * dt - t) > 1e-9 * std::max(1.0, t))
      throw invalid_argument_error("simulate_ensemble: snapshot time off the step grid");
    snap_steps.push_back(std::min(std::max(0ll, k), n_steps));
  }

  EnsembleResult res;
  res.snapshot_times = snaps;
  res.n_paths = cfg.n_paths;
  res.d = d;
  const size_t ns = snaps.size();
  res.samples.assign(static_cast<size_t>(cfg.n_paths) * ns * d, 0.0);
  std::vector<long long> refl(cfg.n_paths, 0);

  auto worker = [&](int lo, int hi) {
    for (int p = lo; p < hi; ++p) {
      SdeConfig pc = cfg.base;
      SdeStepper stepper(
          net, mf, pc,
          RngStream(cfg.base.seed, rng_tags::kSde, cfg.base.stream_index + p));
      Vec x = x0.x;
      size_t next = 0;
      for (long long k = 0; k <= n_steps; ++k) {
        while (next < ns && snap_steps[next] == k) {
          for (int i = 0; i < d; ++i)
            res.samples[(static_cast<size_t>(p) * ns + next) * d + i] = x[i];
          ++next;
        }
        if (k == n_steps) break;
        stepper.step(x, dt);
      }
      refl[p] = stepper.reflections();
    }
  };
  parallel_chunks(cfg.n_paths, cfg.threads, worker);

  for (long long r : refl) res.reflection_count += r;
  res.histograms.assign(ns, std::vector<MarginalHistogram>(d));
  res.mean.assign(ns, Vec(d, 0.0));
  res.variance.assign(ns, Vec(d, 0.0));
  for (size_t s = 0; s < ns; ++s)
    for (int i = 0; i < d; ++i) {
      auto& hist = res.histograms[s][i];
      hist.time = snaps[s];
      hist.coord = i;
      hist.n_bins = cfg.n_bins;
      hist.counts.assign(cfg.n_bins, 0);
    }
  for (int p = 0; p < cfg.n_paths; ++p)
    for (size_t s = 0; s < ns; ++s)
      for (int i = 0; i < d; ++i) {
        const double v = res.sample(p, static_cast<int>(s), i);
        res.mean[s][i] += v;
        res.variance[s][i] += v * v;
        int b = static_cast<int>(v * cfg.n_bins);
        b = std::min(std::max(b, 0), cfg.n_bins - 1);
        ++res.histograms[s][i].counts[b];
      }
  for (size_t s = 0; s < ns; ++s)
    for (int i = 0; i < d; ++i) {
      res.mean[s][i] /= cfg.n_paths;
      res.variance[s][i] =
          res.variance[s][i] / cfg.n_paths - res.mean[s][i] * res.mean[s][i];
    }
  return res;
}

}  // namespace simplexdiff
