#pragma once

#include <cstdint>
#include <vector>

#include "simplexdiff/mean_function.hpp"
#include "simplexdiff/onsager.hpp"
#include "simplexdiff/reaction_network.hpp"

namespace simplexdiff {

enum class NoiseForm { kEigen, kEdge };

struct SdeConfig {
  double h = 0.0;        // fluctuation parameter 1/N; 0 gives the deterministic flow
  double dt = 1e-3;
  double t_end = 1.0;
  NoiseForm noise_form = NoiseForm::kEigen;
  bool reflection = true;
  uint64_t seed = 0;
  uint64_t stream_index = 0;

  // Diagnostics. divergence_term=false drops the backward-Ito correction
  // h div K (used to demonstrate that the correction matters); freeze_sigma
  // reuses the step-0 noise factor (fast mode, excluded from acceptance).
  bool divergence_term = true;
  bool freeze_sigma = false;
  double noise_scale = 1.0;
  int record_stride = 1;

  void validate() const;
};

struct SdeTrajectory {
  Vec times;
  std::vector<Vec> states;
  long long reflection_count = 0;
};

// psi_hat = psi_ss - (h/2) log|g| with the tangential gradient of the
// volume term from the geometry module's derivative scheme.
struct EffectivePotential {
  double value;
  Vec gradient;
};

EffectivePotential effective_potential(const ReactionNetwork& net, const MeanFunction& mf,
                                       const SimplexState& x, double h);

// Euler-Maruyama on the forward-Ito form
//   dX = -K grad psi_hat dt + h div K dt + sqrt(2h) sigma dB
// (eigen noise) or the antisymmetric edge-Brownian variant with the same
// drift. Both noise forms and both drift terms sum to zero over coordinates.
SdeTrajectory simulate_sde(const ReactionNetwork& net, const MeanFunction& mf,
                           const SimplexState& x0, const SdeConfig& cfg);

struct MarginalHistogram {
  double time = 0.0;
  int coord = 0;
  int n_bins = 0;  // uniform bins on [0,1]
  std::vector<int64_t> counts;
};

struct EnsembleConfig {
  SdeConfig base;
  int n_paths = 1;
  std::vector<double> snapshot_times;  // defaults to {t_end}
  int n_bins = 50;
  int threads = 1;
};

struct EnsembleResult {
  std::vector<double> snapshot_times;
  int n_paths = 0;
  int d = 0;
  // Raw per-path states: sample(path, snap, coord).
  std::vector<double> samples;
  std::vector<std::vector<MarginalHistogram>> histograms;  // [snap][coord]
  std::vector<Vec> mean;      // [snap] -> per coordinate
  std::vector<Vec> variance;  // [snap] -> per coordinate
  long long reflection_count = 0;

  double sample(int path, int snap, int coord) const {
    return samples[(static_cast<size_t>(path) * snapshot_times.size() +
                    static_cast<size_t>(snap)) * d + coord];
  }
};

// Path p uses stream (seed, tag=sde, base.stream_index + p); the reduction
// is path-ordered, so results are independent of the thread count.
EnsembleResult simulate_ensemble(const ReactionNetwork& net, const MeanFunction& mf,
                                 const SimplexState& x0, const EnsembleConfig& cfg);

}  // namespace simplexdiff
