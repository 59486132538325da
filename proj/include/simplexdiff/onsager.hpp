#pragma once

#include <functional>
#include <vector>

#include "simplexdiff/linalg.hpp"
#include "simplexdiff/mean_function.hpp"
#include "simplexdiff/reaction_network.hpp"
#include "simplexdiff/theta_profile.hpp"

namespace simplexdiff {

// Onsager response matrix at a simplex point together with its spectral
// data: d-1 positive eigenpairs (descending), the null direction
// e = (1,..,1)/sqrt(d), and the noise factor sigma with K = sigma sigma^T.
struct OnsagerDecomposition {
  Mat K;
  Vec lambdas;  // d-1 positive eigenvalues, descending
  Mat eigvecs;  // d x (d-1); column l is u^l, first nonzero component positive
  Vec e;
  Mat sigma;  // d x (d-1); column l is sqrt(lambda_l) u^l
};

// K alone (no eigen work): off-diagonal -omega_ij theta(x_i/xs_i, x_j/xs_j),
// diagonal the negated off-diagonal row sum.
Mat onsager_matrix(const ReactionNetwork& net, const MeanFunction& mf, const Vec& x);

OnsagerDecomposition build_onsager(const ReactionNetwork& net, const MeanFunction& mf,
                                   const SimplexState& x);

// One reaction channel with rates already evaluated at the state of interest.
struct GeneralReaction {
  std::vector<int> nu;
  double rate_forward;
  double rate_backward;
};

// K = sum_r Lambda(Phi_r^+, Phi_r^-) nu^r (x) nu^r with Lambda the log mean.
Mat build_onsager_general(const std::vector<GeneralReaction>& reactions);

struct FreeEnergyResult {
  double value;
  Vec gradient;  // phi'(x_i / xs_i)
};

FreeEnergyResult free_energy(const ReactionNetwork& net, const MeanFunction& mf,
                             const SimplexState& x);

struct MetricData {
  Mat g;              // (d-1)x(d-1) chart metric
  Mat g_inv;          // leading (d-1)x(d-1) block of K
  double det_g;       // direct determinant of g
  double vol_density; // sqrt(det g)/sqrt(d), density against Hausdorff measure
};

MetricData metric_tensor(const OnsagerDecomposition& dec);

// Scalar field on R^d restricted to the simplex, with caller-supplied
// ambient gradient.
struct ScalarField {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
};

struct DifferentialOps {
  Vec grad_g;                // K grad f (extrinsic pushforward)
  double laplace_beltrami;   // |g|^{-1/2} div(|g|^{1/2} K grad f)
  double dirichlet_density;  // <grad f, K grad f>
};

DifferentialOps differential_operators(const ReactionNetwork& net, const MeanFunction& mf,
                                       const ScalarField& f, const SimplexState& x);

// Generator L f = -<K grad psi_ss, grad f> + h Laplace-Beltrami(f).
double apply_generator(const ReactionNetwork& net, const MeanFunction& mf,
                       const ScalarField& f, const SimplexState& x, double h);

// Stationary Hamilton-Jacobi residual
// sum_{(i,j) in E} (Q_ji x_j e^{d_i psi - d_j psi} - Q_ij x_i).
double hje_residual(const ReactionNetwork& net,
                    const std::function<Vec(const Vec&)>& psi_gradient,
                    const SimplexState& x);

struct Trajectory {
  Vec times;
  std::vector<Vec> states;
};

// RK4 on dx/dt = -K(x) grad psi_ss(x) with simplex-feasibility step
// rejection (dt halving, at most 40 halvings per step).
Trajectory solve_gradient_flow(const ReactionNetwork& net, const MeanFunction& mf,
                               const SimplexState& x0, double t_end, double dt);

// W_2((0,1),(x,1-x)) = int_0^x theta(r)^{-1/2} dr for a two-point profile.
double wasserstein2_twopoint(const ThetaProfile& profile, double x);

// --- shared derivative scheme -------------------------------------------
// Central differences with step min(1e-6, margin/4) along the tangent
// directions e_i - e_d; the d-th chart component of returned gradients is 0.

// (div K)_i = sum_j d_j K_ij, evaluated tangentially.
Vec onsager_divergence(const ReactionNetwork& net, const MeanFunction& mf,
                       const SimplexState& x);

// log det g = log d - log prod lambda_l; the eigenvalue product is taken as
// det(K + e e^T), which avoids eigenvalue tracking entirely.
double log_det_metric(const ReactionNetwork& net, const MeanFunction& mf, const Vec& x);

Vec grad_log_det_metric(const ReactionNetwork& net, const MeanFunction& mf,
                        const SimplexState& x);

}  // namespace simplexdiff
