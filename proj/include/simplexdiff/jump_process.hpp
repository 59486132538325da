#pragma once

#include <cstdint>
#include <vector>

#include "simplexdiff/reaction_network.hpp"
#include "simplexdiff/rng.hpp"

namespace simplexdiff {

// Sample path of the rescaled counting process on the lattice simplex.
// Counts are exact integers; states[k] holds on [times[k], times[k+1]).
struct JumpTrajectory {
  std::vector<double> times;
  std::vector<std::vector<int64_t>> counts;
  int64_t N = 0;

  // Piecewise-constant lookup; t must lie in [times.front(), times.back()].
  const std::vector<int64_t>& counts_at(double t) const;
  Vec state_at(double t) const;  // counts / N
};

// Gillespie direct method with propensity Q_ij * c_i per directed edge.
// The trajectory ends with the pre-t_end state recorded at t_end.
JumpTrajectory simulate_ssa(const ReactionNetwork& net, int64_t N,
                            const std::vector<int64_t>& counts0, double t_end,
                            RngStream stream);
// Convenience overload taking a simplex state that must sit on the lattice.
JumpTrajectory simulate_ssa(const ReactionNetwork& net, int64_t N,
                            const SimplexState& x0, double t_end, RngStream stream);

// Ensemble mean of X^h on a fixed time grid; per-path streams are
// (seed, tag=ssa, path index) and the reduction is path-ordered, so the
// result does not depend on the thread count.
std::vector<Vec> ssa_ensemble_mean(const ReactionNetwork& net, int64_t N,
                                   const std::vector<int64_t>& counts0,
                                   const Vec& grid_times, int n_paths, uint64_t seed,
                                   int threads);

// Count lattice {l in N^d : |l| = N} with colexicographic ranking.
class SimplexLattice {
 public:
  SimplexLattice(int d, int64_t N);

  int dim() const { return d_; }
  int64_t total() const { return N_; }
  size_t size() const { return size_; }
  size_t rank(const std::vector<int64_t>& l) const;
  std::vector<int64_t> unrank(size_t r) const;
  // Grid spacing h = 1/N.
  double h() const { return 1.0 / static_cast<double>(N_); }

 private:
  uint64_t binom(int64_t n, int k) const;

  int d_;
  int64_t N_;
  size_t size_;
  std::vector<uint64_t> binom_;  // (N+d) x d table, row-major
};

// Probability vector over the lattice, indexed by colex rank.
struct LatticeDistribution {
  int d = 0;
  int64_t N = 0;
  Vec probs;

  static LatticeDistribution point_mass(const SimplexLattice& lattice,
                                        const std::vector<int64_t>& l);
  double mass() const;
};

struct CmeResult {
  LatticeDistribution dist;
  long clip_count = 0;  // probabilities observed below -1e-14 and clipped
};

// Explicit RK4 on the chemical master equation. Preconditions: lattice
// size <= 1e6 and dt * max total outflow rate <= 0.5 (both checked);
// dt = 0 picks the largest stable step.
CmeResult solve_cme(const ReactionNetwork& net, int64_t N,
                    const LatticeDistribution& p0, double t_end, double dt);

// Product-form stationary law p(l) ~ N!/(prod l_i!) prod (x^s_i)^{l_i}.
LatticeDistribution cme_stationary(const ReactionNetwork& net, int64_t N);

// psi_h = -h log p per lattice state; +infinity where p <= 0.
Vec wkb_transform(const LatticeDistribution& p, double h);

// Marginal law of coordinate `coord`: probabilities of counts 0..N.
Vec lattice_marginal(const LatticeDistribution& p, int coord);

}  // namespace simplexdiff
