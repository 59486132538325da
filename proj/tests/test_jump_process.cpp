#include <doctest.h>

#include <cmath>

#include "simplexdiff/diagnostics.hpp"
#include "simplexdiff/errors.hpp"
#include "simplexdiff/jump_process.hpp"
#include "simplexdiff/linalg.hpp"
#include "simplexdiff/onsager.hpp"
#include "test_helpers.hpp"

using namespace simplexdiff;

namespace {

ReactionNetwork sym2() {
  return ReactionNetwork::build(QMatrix::from_rows({{-1, 1}, {1, -1}}));
}

}  // namespace

TEST_CASE("lattice ranking is a colex bijection") {
  for (auto [d, n] : {std::pair<int, int64_t>{2, 7}, {3, 5}, {4, 6}}) {
    SimplexLattice lat(d, n);
    const size_t expect =
        static_cast<size_t>(std::llround(std::exp(std::lgamma(n + d) -
                                                  std::lgamma(n + 1.0) -
                                                  std::lgamma(d))));
    CHECK(lat.size() == expect);
    for (size_t r = 0; r < lat.size(); ++r) {
      const auto l = lat.unrank(r);
      int64_t sum = 0;
      for (int64_t v : l) sum += v;
      CHECK(sum == n);
      CHECK(lat.rank(l) == r);
    }
  }
  CHECK_THROWS_AS(SimplexLattice(6, 400), Error);  // > 1e6 states
}

TEST_CASE("ssa: zero horizon returns the initial state only") {
  const auto net = sym2();
  const auto traj = simulate_ssa(net, 5, std::vector<int64_t>{3, 2}, 0.0,
                                 RngStream(1, rng_tags::kSsa, 0));
  CHECK(traj.times.size() == 1);
  CHECK(traj.counts[0][0] == 3);
}

TEST_CASE("ssa: N=1 alternates and matches the two-state law") {
  const auto net = sym2();
  // Alternation between (1,0) and (0,1) is structural (the final record
  // repeats the pre-horizon state at t_end and is excluded).
  const auto traj = simulate_ssa(net, 1, std::vector<int64_t>{1, 0}, 50.0,
                                 RngStream(2, rng_tags::kSsa, 0));
  for (size_t k = 0; k + 2 < traj.counts.size(); ++k)
    CHECK(traj.counts[k][0] != traj.counts[k + 1][0]);

  const int n_paths = 100000;
  int hits = 0;
  for (int p = 0; p < n_paths; ++p) {
    const auto t =
        simulate_ssa(net, 1, std::vector<int64_t>{1, 0}, 1.0, RngStream(3, rng_tags::kSsa, p));
    hits += t.state_at(1.0)[0] > 0.5 ? 1 : 0;
  }
  const double want = testutil::two_state_p1(1.0);
  const double se = std::sqrt(want * (1.0 - want) / n_paths);
  CHECK(std::abs(static_cast<double>(hits) / n_paths - want) <= 3.0 * se);
}

TEST_CASE("ssa: counts are conserved exactly") {
  RngStream rng(4, rng_tags::kTests, 0);
  const auto net = random_db_network(3, rng);
  const auto traj = simulate_ssa(net, 60, std::vector<int64_t>{20, 20, 20}, 2.0,
                                 RngStream(4, rng_tags::kSsa, 0));
  for (const auto& c : traj.counts) CHECK(c[0] + c[1] + c[2] == 60);
  // Each jump moves one unit of mass along an edge: counts differ by +1/-1
  // in exactly two coordinates (the final record repeats the last state).
  for (size_t k = 0; k + 2 < traj.counts.size(); ++k) {
    int plus = 0, minus = 0, same = 0;
    for (int i = 0; i < 3; ++i) {
      const int64_t diff = traj.counts[k + 1][i] - traj.counts[k][i];
      plus += diff == 1;
      minus += diff == -1;
      same += diff == 0;
    }
    CHECK(plus == 1);
    CHECK(minus == 1);
    CHECK(same == 1);
  }
  // Off-lattice x0 is rejected.
  CHECK_THROWS_AS(simulate_ssa(net, 10, SimplexState::create({0.55, 0.25, 0.2}), 1.0,
                               RngStream(1, rng_tags::kSsa, 0)),
                  Error);
}

TEST_CASE("ssa ensemble mean tracks the thermodynamic-limit ODE") {
  const auto net = sym2();
  const int64_t n_mol = 10000;
  const Vec grid{0.0, 0.25, 0.5, 0.75, 1.0};
  const auto mean =
      ssa_ensemble_mean(net, n_mol, std::vector<int64_t>{9900, 100}, grid, 1000, 5, 2);
  // The mean of the linear jump process solves x' = Q^T x exactly; compare
  // against the gradient-flow integrator (same equation for the KL mean).
  const auto ode = solve_gradient_flow(net, MeanFunction::kl(),
                                       SimplexState::create({0.99, 0.01}), 1.0, 1e-3);
  for (size_t k = 1; k < grid.size(); ++k) {
    const double t = grid[k];
    const size_t idx = static_cast<size_t>(std::llround(t / 1e-3));
    const double se = std::sqrt(0.25 / (static_cast<double>(n_mol) * 1000.0));
    CHECK(std::abs(mean[k][0] - ode.states[idx][0]) <= 4.0 * se);
  }
}

TEST_CASE("cme: two-state analytic solution and conservation") {
  const auto net = sym2();
  SimplexLattice lat(2, 1);
  auto p0 = LatticeDistribution::point_mass(lat, {1, 0});
  double t = 0.0;
  auto p = p0;
  for (int chunk = 0; chunk < 10; ++chunk) {
    p = solve_cme(net, 1, p, 0.1, 0.01).dist;
    t += 0.1;
    CHECK(std::abs(p.mass() - 1.0) <= 1e-12);
    const double want = testutil::two_state_p1(t);
    CHECK(p.probs[lat.rank({1, 0})] == doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("cme: stationary law is a fixed point and matches the null vector") {
  RngStream rng(6, rng_tags::kTests, 0);
  const auto net = random_db_network(2, rng);
  const int64_t n_mol = 6;
  const auto stat = cme_stationary(net, n_mol);
  const auto evolved = solve_cme(net, n_mol, stat, 1.0, 0.005);
  double l1 = 0.0;
  for (size_t s = 0; s < stat.probs.size(); ++s)
    l1 += std::abs(evolved.dist.probs[s] - stat.probs[s]);
  CHECK(l1 <= 1e-8);
  CHECK(evolved.clip_count == 0);

  // Dense generator null vector (least squares with the mass constraint).
  SimplexLattice lat(2, n_mol);
  const int n = static_cast<int>(lat.size());
  Mat gen(n + 1, n, 0.0);
  for (int s = 0; s < n; ++s) {
    const auto l = lat.unrank(s);
    for (const auto& [a, b] : net.edges()) {
      if (l[a] == 0) continue;
      auto to = l;
      --to[a];
      ++to[b];
      const double rate = net.q().entries(a, b) * static_cast<double>(l[a]);
      gen(static_cast<int>(lat.rank(to)), s) += rate;
      gen(s, s) -= rate;
    }
  }
  for (int s = 0; s < n; ++s) gen(n, s) = 1.0;
  Vec rhs(n + 1, 0.0);
  rhs[n] = 1.0;
  const Vec null_vec = least_squares(gen, rhs);
  for (int s = 0; s < n; ++s)
    CHECK(null_vec[s] == doctest::Approx(stat.probs[s]).epsilon(1e-10));
}

TEST_CASE("cme: unstable step and oversized lattice are rejected") {
  const auto net = sym2();
  SimplexLattice lat(2, 50);
  const auto p0 = LatticeDistribution::point_mass(lat, {25, 25});
  CHECK_THROWS_WITH_AS(solve_cme(net, 50, p0, 1.0, 0.2),
                       doctest::Contains("UnstableTimestep"), Error);
}

TEST_CASE("ssa and cme marginals agree within sampling error") {
  const auto net = sym2();
  for (int64_t n_mol : {1, 2}) {
    SimplexLattice lat(2, n_mol);
    std::vector<int64_t> c0(2, 0);
    c0[0] = n_mol;
    const int n_paths = 20000;
    const Vec times{0.5, 1.0, 2.0};
    // Empirical marginal of counts of species 1 at each time.
    std::vector<std::vector<double>> freq(times.size(), std::vector<double>(n_mol + 1, 0.0));
    for (int p = 0; p < n_paths; ++p) {
      const auto traj = simulate_ssa(net, n_mol, c0, 2.0,
                                     RngStream(7 + n_mol, rng_tags::kSsa, p));
      for (size_t k = 0; k < times.size(); ++k)
        freq[k][static_cast<size_t>(traj.counts_at(times[k])[0])] += 1.0;
    }
    auto p = LatticeDistribution::point_mass(lat, c0);
    double t_prev = 0.0;
    for (size_t k = 0; k < times.size(); ++k) {
      p = solve_cme(net, n_mol, p, times[k] - t_prev, 0.005).dist;
      t_prev = times[k];
      const Vec marg = lattice_marginal(p, 0);
      for (int64_t c = 0; c <= n_mol; ++c) {
        const double want = marg[static_cast<size_t>(c)];
        const double got = freq[k][static_cast<size_t>(c)] / n_paths;
        const double se = std::sqrt(std::max(want * (1.0 - want), 1e-12) / n_paths);
        CHECK(std::abs(got - want) <= 4.0 * se);
      }
    }
  }
}

TEST_CASE("wkb transform") {
  const auto net = sym2();
  // Uniform law: psi = h log M everywhere.
  LatticeDistribution uniform;
  uniform.d = 2;
  uniform.N = 9;
  SimplexLattice lat(2, 9);
  uniform.probs.assign(lat.size(), 1.0 / lat.size());
  const double h = 1.0 / 9.0;
  const Vec psi = wkb_transform(uniform, h);
  for (double v : psi)
    CHECK(v == doctest::Approx(h * std::log(10.0)).epsilon(1e-13));

  // Exact inverse pair: p = e^{-psi/h} recovers psi.
  LatticeDistribution shaped = uniform;
  for (size_t s = 0; s < shaped.probs.size(); ++s)
    shaped.probs[s] = std::exp(-(0.3 + 0.01 * s) / h);
  const Vec recovered = wkb_transform(shaped, h);
  for (size_t s = 0; s < recovered.size(); ++s)
    CHECK(recovered[s] == doctest::Approx(0.3 + 0.01 * s).epsilon(1e-12));

  // Stationary CME law: psi_h approaches the KL rate function as N grows.
  double prev_gap = 1e9;
  for (int64_t n_mol : {25, 50, 100}) {
    const auto stat = cme_stationary(net, n_mol);
    const Vec psi_h = wkb_transform(stat, 1.0 / static_cast<double>(n_mol));
    SimplexLattice lattice(2, n_mol);
    double gap = 0.0;
    for (size_t s = 0; s < psi_h.size(); ++s) {
      const auto l = lattice.unrank(s);
      const double x = static_cast<double>(l[0]) / static_cast<double>(n_mol);
      double kl = std::log(2.0);  // boundary value of the KL divergence
      if (x > 0.0 && x < 1.0)
        kl = x * std::log(2.0 * x) + (1.0 - x) * std::log(2.0 * (1.0 - x));
      gap = std::max(gap, std::abs(psi_h[s] - kl));
    }
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}
