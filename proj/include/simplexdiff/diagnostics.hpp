#pragma once

#include <cstdint>
#include <vector>

#include "simplexdiff/mean_function.hpp"
#include "simplexdiff/onsager.hpp"
#include "simplexdiff/reaction_network.hpp"
#include "simplexdiff/rng.hpp"

namespace simplexdiff {

// Detailed-balanced network on the complete graph with rates O(1):
// draw symmetric weights w_ij and a positive stationary vector, then set
// Q_ij = w_ij / x^s_i. Detailed balance holds by construction.
ReactionNetwork random_db_network(int d, RngStream& rng);

// Interior point with margin at least 0.1/d (Dirichlet(1) mixed with the
// barycenter).
SimplexState random_interior_state(int d, RngStream& rng);

// Residuals of the eigenstructure and metric identities at one point.
struct GeometryResiduals {
  double lambda_min = 0.0;
  double eig = 0.0;          // max ||K u - lambda u||_inf and ||K e||_inf
  double orthonormal = 0.0;  // max |u^k . u^l - delta|
  double mean_zero = 0.0;    // max |sum_i u^l_i|
  double sigma = 0.0;        // max |sigma sigma^T - K|
  double row_sum = 0.0;      // max |sum_j K_ij|
  double det_rel = 0.0;      // |det g - d/prod lambda| / (d/prod lambda)
  double metric_inv = 0.0;   // max |g g_inv - I|
};

GeometryResiduals geometry_residuals(const ReactionNetwork& net, const MeanFunction& mf,
                                     const SimplexState& x);

// Per-point diagnostic row (the CSV payload of the geometry-check command).
struct GeometrySample {
  SimplexState x;
  Vec lambdas;
  double det_g = 0.0;
  GeometryResiduals residuals;
};

std::vector<GeometrySample> geometry_samples(const ReactionNetwork& net,
                                             const MeanFunction& mf, int samples,
                                             RngStream& rng);

struct GeometryCheckReport {
  int d = 0;
  int samples = 0;
  GeometryResiduals worst;
  bool pass = false;  // eigen residuals <= 1e-10, det identity <= 1e-8 relative
};

GeometryCheckReport geometry_check(int d, int samples, uint64_t seed,
                                   const MeanFunction& mf);

}  // namespace simplexdiff
