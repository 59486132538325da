#include "simplexdiff/jump_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "simplexdiff/errors.hpp"
#include "simplexdiff/parallel.hpp"

namespace simplexdiff {

const std::vector<int64_t>& JumpTrajectory::counts_at(double t) const {
  if (times.empty() || t < times.front() - 1e-12 || t > times.back() + 1e-12)
    throw invalid_argument_error("JumpTrajectory: time outside recorded range");
  // Last epoch with times[k] <= t.
  auto it = std::upper_bound(times.begin(), times.end(), t);
  size_t k = static_cast<size_t>(it - times.begin());
  if (k > 0) --k;
  return counts[k];
}

Vec JumpTrajectory::state_at(double t) const {
  const auto& c = counts_at(t);
  Vec x(c.size());
  for (size_t i = 0; i < c.size(); ++i)
    x[i] = static_cast<double>(c[i]) / static_cast<double>(N);
  return x;
}

JumpTrajectory simulate_ssa(const ReactionNetwork& net, int64_t N,
                            const std::vector<int64_t>& counts0, double t_end,
                            RngStream stream) {
  const int d = net.dim();
  if (static_cast<int>(counts0.size()) != d)
    throw invalid_argument_error("simulate_ssa: counts0 dimension mismatch");
  int64_t total = 0;
  for (int64_t c : counts0) {
    if (c < 0) throw invalid_argument_error("simulate_ssa: negative count");
    total += c;
  }
  if (total != N) throw invalid_argument_error("simulate_ssa: counts must sum to N");
  if (t_end < 0.0) throw invalid_argument_error("simulate_ssa: negative horizon");

  JumpTrajectory traj;
  traj.N = N;
  traj.times.push_back(0.0);
  traj.counts.push_back(counts0);

  std::vector<int64_t> c = counts0;
  const auto& edges = net.edges();
  std::vector<double> prop(edges.size());
  double t = 0.0;
  for (;;) {
    double a0 = 0.0;
    for (size_t e = 0; e < edges.size(); ++e) {
      prop[e] = net.q().entries(edges[e].first, edges[e].second) *
                static_cast<double>(c[edges[e].first]);
      a0 += prop[e];
    }
    if (a0 <= 0.0) break;  // absorbed; cannot occur off the empty state when connected
    const double tau = stream.exponential(a0);
    if (t + tau >= t_end) break;
    t += tau;
    double u = stream.uniform() * a0;
    size_t pick = edges.size() - 1;
    double cum = 0.0;
    for (size_t e = 0; e < edges.size(); ++e) {
      cum += prop[e];
      if (u <= cum) {
        pick = e;
        break;
      }
    }
    --c[edges[pick].first];
    ++c[edges[pick].second];
    traj.times.push_back(t);
    traj.counts.push_back(c);
  }
  if (t_end > traj.times.back()) {
    traj.times.push_back(t_end);
    traj.counts.push_back(c);
  }
  return traj;
}

JumpTrajectory simulate_ssa(const ReactionNetwork& net, int64_t N,
                            const SimplexState& x0, double t_end, RngStream stream) {
  std::vector<int64_t> c(x0.x.size());
  int64_t sum = 0;
  for (size_t i = 0; i < x0.x.size(); ++i) {
    const double scaled = x0.x[i] * static_cast<double>(N);
    c[i] = std::llround(scaled);
    if (std::abs(scaled - static_cast<double>(c[i])) > 1e-9)
      throw invalid_argument_error("simulate_ssa: x0 not on the lattice S_h");
    sum += c[i];
  }
  if (sum != N) throw invalid_argument_error("simulate_ssa: x0 counts do not sum to N");
  return simulate_ssa(net, N, c, t_end, std::move(stream));
}

std::vector<Vec> ssa_ensemble_mean(const ReactionNetwork& net, int64_t N,
                                   const std::vector<int64_t>& counts0,
                                   const Vec& grid_times, int n_paths, uint64_t seed,
                                   int threads) {
  const int d = net.dim();
  const size_t n_times = grid_times.size();
  if (n_paths < 1) throw invalid_argument_error("ssa_ensemble_mean: n_paths < 1");
  const double t_end = *std::max_element(grid_times.begin(), grid_times.end());

  std::vector<double> samples(static_cast<size_t>(n_paths) * n_times * d);
  auto worker = [&](int lo, int hi) {
    for (int p = lo; p < hi; ++p) {
      JumpTrajectory traj = simulate_ssa(
          net, N, counts0, t_end,
          RngStream(seed, rng_tags::kSsa, static_cast<uint64_t>(p)));
      for (size_t k = 0; k < n_times; ++k) {
        const Vec x = traj.state_at(grid_times[k]);
        for (int i = 0; i < d; ++i)
          samples[(static_cast<size_t>(p) * n_times + k) * d + i] = x[i];
      }
    }
  };
  parallel_chunks(n_paths, threads, worker);

  std::vector<Vec> mean(n_times, Vec(d, 0.0));
  for (int p = 0; p < n_paths; ++p)
    for (size_t k = 0; k < n_times; ++k)
      for (int i = 0; i < d; ++i)
        mean[k][i] += samples[(static_cast<size_t>(p) * n_times + k) * d + i];
  for (auto& row : mean)
    for (double& v : row) v /= n_paths;
  return mean;
}

SimplexLattice::SimplexLattice(int d, int64_t N) : d_(d), N_(N) {
  if (d < 2 || N < 1) throw invalid_argument_error("SimplexLattice: need d >= 2, N >= 1");
  // Pascal table C(n, k) for n <= N+d-1, k <= d-1.
  const int64_t rows = N + d;
  binom_.assign(static_cast<size_t>(rows) * d, 0);
  for (int64_t n = 0; n < rows; ++n) {
    binom_[static_cast<size_t>(n) * d_] = 1;
    for (int k = 1; k < d; ++k) {
      uint64_t v = (n == 0) ? 0 : binom_[static_cast<size_t>(n - 1) * d_ + k] +
                                      binom_[static_cast<size_t>(n - 1) * d_ + k - 1];
      if (n == 0 && k == 0) v = 1;
      binom_[static_cast<size_t>(n) * d_ + k] = v;
      if (v > (1ull << 62))
        throw lattice_too_large("SimplexLattice: binomial overflow");
    }
  }
  const uint64_t sz = binom(N + d - 1, d - 1);
  if (sz > 1000000ull)
    throw lattice_too_large("lattice has " + std::to_string(sz) +
                            " states (limit 1e6)");
  size_ = static_cast<size_t>(sz);
}

uint64_t SimplexLattice::binom(int64_t n, int k) const {
  if (k < 0 || n < 0 || k > d_ - 1 || n >= static_cast<int64_t>(N_ + d_)) {
    if (k == 0 && n >= 0) return 1;
    if (n < k) return 0;
    throw invalid_argument_error("SimplexLattice: binomial out of table range");
  }
  return binom_[static_cast<size_t>(n) * d_ + k];
}

size_t SimplexLattice::rank(const std::vector<int64_t>& l) const {
  uint64_t r = 0;
  int64_t prefix = l[0];
  for (int k = 2; k <= d_; ++k) {
    const int64_t s_prev = prefix;
    prefix += l[k - 1];
    r += binom(prefix + k - 1, k - 1) - binom(s_prev + k - 1, k - 1);
  }
  return static_cast<size_t>(r);
}

std::vector<int64_t> SimplexLattice::unrank(size_t r) const {
  std::vector<int64_t> l(d_, 0);
  uint64_t rem = r;
  int64_t sum = N_;  // sum of the first k coordinates at level k
  for (int k = d_; k >= 2; --k) {
    // Largest v in [0, sum] with C(sum+k-1,k-1) - C(sum-v+k-1,k-1) <= rem.
    int64_t lo = 0, hi = sum;
    const uint64_t top = binom(sum + k - 1, k - 1);
    while (lo < hi) {
      const int64_t mid = (lo + hi + 1) / 2;
      if (top - binom(sum - mid + k - 1, k - 1) <= rem)
        lo = mid;
      else
        hi = mid - 1;
    }
    l[k - 1] = lo;
    rem -= top - binom(sum - lo + k - 1, k - 1);
    sum -= lo;
  }
  l[0] = sum;
  return l;
}

LatticeDistribution LatticeDistribution::point_mass(const SimplexLattice& lattice,
                                                    const std::vector<int64_t>& l) {
  LatticeDistribution p;
  p.d = lattice.dim();
  p.N = lattice.total();
  p.probs.assign(lattice.size(), 0.0);
  p.probs[lattice.rank(l)] = 1.0;
  return p;
}

double LatticeDistribution::mass() const {
  double m = 0.0;
  for (double v : probs) m += v;
  return m;
}

namespace {

struct CmeGenerator {
  const ReactionNetwork& net;
  const SimplexLattice& lattice;
  std::vector<int64_t> states;  // flattened lattice states
  double max_outflow = 0.0;

  CmeGenerator(const ReactionNetwork& n, const SimplexLattice& lat)
      : net(n), lattice(lat) {
    const int d = lattice.dim();
    states.resize(lattice.size() * d);
    for (size_t s = 0; s < lattice.size(); ++s) {
      const auto l = lattice.unrank(s);
      std::copy(l.begin(), l.end(), states.begin() + s * d);
    }
    // Outflow is linear in counts, so the max sits on a vertex.
    for (int i = 0; i < d; ++i) {
      double rowsum = 0.0;
      for (int j = 0; j < d; ++j)
        if (j != i) rowsum += net.q().entries(i, j);
      max_outflow = std::max(max_outflow, static_cast<double>(lattice.total()) * rowsum);
    }
  }

  // dp += A p (conservative pairwise transfer).
  void apply(const Vec& p, Vec& dp) const {
    const int d = lattice.dim();
    std::fill(dp.begin(), dp.end(), 0.0);
    std::vector<int64_t> l(d);
    for (size_t s = 0; s < lattice.size(); ++s) {
      const double ps = p[s];
      if (ps == 0.0) continue;
      std::copy(states.begin() + s * d, states.begin() + (s + 1) * d, l.begin());
      for (const auto& [a, b] : net.edges()) {
        if (l[a] == 0) continue;
        const double rate = net.q().entries(a, b) * static_cast<double>(l[a]);
        --l[a];
        ++l[b];
        const size_t target = lattice.rank(l);
        ++l[a];
        --l[b];
        const double flow = rate * ps;
        dp[s] -= flow;
        dp[target] += flow;
      }
    }
  }
};

}  // namespace

CmeResult solve_cme(const ReactionNetwork& net, int64_t N,
                    const LatticeDistribution& p0, double t_end, double dt) {
  const SimplexLattice lattice(net.dim(), N);
  if (p0.probs.size() != lattice.size())
    throw invalid_argument_error("solve_cme: p0 size does not match lattice");
  CmeGenerator gen(net, lattice);
  if (dt <= 0.0) dt = 0.45 / std::max(gen.max_outflow, 1e-300);
  if (dt * gen.max_outflow > 0.5)
    throw unstable_timestep("solve_cme: dt * max outflow = " +
                            std::to_string(dt * gen.max_outflow) + " > 0.5");

  CmeResult out;
  out.dist = p0;
  Vec& p = out.dist.probs;
  const size_t n = p.size();
  Vec k1(n), k2(n), k3(n), k4(n), tmp(n);
  double t = 0.0;
  while (t < t_end - 1e-15) {
    const double step = std::min(dt, t_end - t);
    gen.apply(p, k1);
    for (size_t i = 0; i < n; ++i) tmp[i] = p[i] + 0.5 * step * k1[i];
    gen.apply(tmp, k2);
    for (size_t i = 0; i < n; ++i) tmp[i] = p[i] + 0.5 * step * k2[i];
    gen.apply(tmp, k3);
    for (size_t i = 0; i < n; ++i) tmp[i] = p[i] + step * k3[i];
    gen.apply(tmp, k4);
    for (size_t i = 0; i < n; ++i) {
      p[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (p[i] < 0.0) {
        if (p[i] < -1e-14) ++out.clip_count;
        p[i] = 0.0;
      }
    }
    t += step;
  }
  return out;
}

LatticeDistribution cme_stationary(const ReactionNetwork& net, int64_t N) {
  const SimplexLattice lattice(net.dim(), N);
  const int d = net.dim();
  LatticeDistribution p;
  p.d = d;
  p.N = N;
  p.probs.resize(lattice.size());
  const double lg_n = std::lgamma(static_cast<double>(N) + 1.0);
  double mass = 0.0;
  for (size_t s = 0; s < lattice.size(); ++s) {
    const auto l = lattice.unrank(s);
    double lp = lg_n;
    for (int i = 0; i < d; ++i) {
      lp -= std::lgamma(static_cast<double>(l[i]) + 1.0);
      if (l[i] > 0) lp += static_cast<double>(l[i]) * std::log(net.x_stat()[i]);
    }
    p.probs[s] = std::exp(lp);
    mass += p.probs[s];
  }
  for (double& v : p.probs) v /= mass;
  return p;
}

Vec wkb_transform(const LatticeDistribution& p, double h) {
  Vec psi(p.probs.size());
  for (size_t s = 0; s < p.probs.size(); ++s)
    psi[s] = (p.probs[s] > 0.0) ? -h * std::log(p.probs[s])
                                : std::numeric_limits<double>::infinity();
  return psi;
}

Vec lattice_marginal(const LatticeDistribution& p, int coord) {
  const SimplexLattice lattice(p.d, p.N);
  Vec marg(static_cast<size_t>(p.N) + 1, 0.0);
  for (size_t s = 0; s < p.probs.size(); ++s)
    marg[static_cast<size_t>(lattice.unrank(s)[coord])] += p.probs[s];
  return marg;
}

}  // namespace simplexdiff
