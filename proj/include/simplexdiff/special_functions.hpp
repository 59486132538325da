#pragma once

#include <functional>

namespace simplexdiff {

// Logarithmic mean (s - t)/(log s - log t), continuous through s = t.
// Evaluated as (s - t)/(2 atanh((s-t)/(s+t))) which is cancellation-free;
// below the relative threshold 1e-9 the limit value (s+t)/2 is returned.
double log_mean(double s, double t);

// Lower incomplete beta integral B(x,a,b) = \int_0^x t^{a-1}(1-t)^{b-1} dt
// (not normalized). Absolute accuracy ~1e-13 for a,b in [1/4, 4].
double incomplete_beta(double x, double a, double b);

// Complete beta B(a,b).
double beta_complete(double a, double b);

// How the integrand behaves at the endpoints 0 and 1; selects the
// substitution used by quad_singular.
enum class QuadCertificate {
  kSmooth,        // no endpoint singularity
  kSqrtEndpoint,  // f ~ t^{-1/2} type: t = sin^2 u substitution
  kLogEndpoint,   // f ~ log-type blowup: t = u^2 substitution + refinement
};

// Adaptive Gauss-Kronrod integral of f over [0, x], x <= 1, with the
// endpoint treatment named by the certificate. Tolerance 1e-10 absolute;
// throws QuadratureFailure after 10^6 evaluations. Integrand is never
// evaluated closer than 1e-14 to 0 or 1.
double quad_singular(const std::function<double(double)>& f, double x,
                     QuadCertificate certificate, double tol = 1e-10);

// Adaptive Gauss-Kronrod on an interior interval [a, b] (no substitution).
double quad_adaptive(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-10);

}  // namespace simplexdiff
