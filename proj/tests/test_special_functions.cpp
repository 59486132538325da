#include <doctest.h>

#include <cmath>

#include "simplexdiff/errors.hpp"
#include "simplexdiff/rng.hpp"
#include "simplexdiff/special_functions.hpp"
#include "test_helpers.hpp"

using namespace simplexdiff;

TEST_CASE("log_mean limit and direct values") {
  CHECK(log_mean(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(log_mean(2.5, 2.5) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(log_mean(4.0, 1.0) == doctest::Approx(3.0 / std::log(4.0)).epsilon(1e-14));
  CHECK(log_mean(std::exp(1.0), 1.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  CHECK_THROWS_AS(log_mean(0.0, 1.0), Error);
  CHECK_THROWS_AS(log_mean(1.0, -2.0), Error);
}

TEST_CASE("log_mean sits between min and arithmetic mean") {
  RngStream rng(123, rng_tags::kTests, 0);
  for (int i = 0; i < 10000; ++i) {
    const double s = std::exp(6.0 * (rng.uniform() - 0.5));
    const double t = std::exp(6.0 * (rng.uniform() - 0.5));
    const double lm = log_mean(s, t);
    CHECK(lm >= std::min(s, t) - 1e-12);
    CHECK(lm <= 0.5 * (s + t) + 1e-12);
  }
}

TEST_CASE("incomplete beta: closed-form points") {
  CHECK(incomplete_beta(1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(incomplete_beta(0.25, 0.5, 0.5) == doctest::Approx(M_PI / 3.0).epsilon(1e-13));
  CHECK(incomplete_beta(0.0, 0.3, 2.0) == 0.0);
  CHECK_THROWS_AS(incomplete_beta(-0.1, 1.0, 1.0), Error);
  CHECK_THROWS_AS(incomplete_beta(0.5, 0.0, 1.0), Error);
}

TEST_CASE("incomplete beta equals 2 asin(sqrt x) at a = b = 1/2") {
  double worst = 0.0;
  for (int i = 1; i < 1000; ++i) {
    const double x = i / 1000.0;
    const double want = 2.0 * std::asin(std::sqrt(x));
    worst = std::max(worst, std::abs(incomplete_beta(x, 0.5, 0.5) - want));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("complete beta against the independent gamma oracle") {
  const double oracle = testutil::gamma_oracle(0.75) * testutil::gamma_oracle(0.75) /
                        testutil::gamma_oracle(1.5);
  CHECK(std::abs(beta_complete(0.75, 0.75) - oracle) <= 1e-12);
  // And the quadrature route on the defining integral.
  const double quad = quad_singular(
      [](double t) { return std::pow(t, -0.25) * std::pow(1.0 - t, -0.25); }, 1.0,
      QuadCertificate::kSqrtEndpoint, 1e-12);
  CHECK(std::abs(quad - oracle) <= 1e-10);
}

TEST_CASE("quad_singular basics") {
  CHECK(quad_singular([](double) { return 1.0; }, 1.0, QuadCertificate::kSmooth) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(quad_singular([](double t) { return 1.0 / std::sqrt(t); }, 1.0,
                      QuadCertificate::kSqrtEndpoint) ==
        doctest::Approx(2.0).epsilon(1e-12));
  // Log-type endpoint: int_0^1 sqrt(log(1/t)) dt = Gamma(3/2) = sqrt(pi)/2.
  CHECK(quad_singular([](double t) { return std::sqrt(std::log(1.0 / t)); }, 1.0,
                      QuadCertificate::kLogEndpoint) ==
        doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-9));
}

TEST_CASE("quad_singular of theta^{-1/2} matches the beta oracle") {
  const double b34 = testutil::gamma_oracle(0.75) * testutil::gamma_oracle(0.75) /
                     testutil::gamma_oracle(1.5);
  const double got = quad_singular(
      [](double t) { return 1.0 / std::sqrt(2.0 * std::sqrt(t * (1.0 - t))); }, 1.0,
      QuadCertificate::kSqrtEndpoint);
  CHECK(std::abs(got - b34 / std::sqrt(2.0)) <= 1e-9);
}

TEST_CASE("quad_singular is monotone in the upper limit") {
  auto f = [](double t) { return 1.0 / std::sqrt(t); };
  double prev = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double x = i / 20.0;
    const double v = quad_singular(f, x, QuadCertificate::kSqrtEndpoint);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}
