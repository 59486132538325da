#include <doctest.h>

#include <cmath>

#include "simplexdiff/diagnostics.hpp"
#include "simplexdiff/errors.hpp"
#include "simplexdiff/reaction_network.hpp"
#include "simplexdiff/rng.hpp"

using namespace simplexdiff;

TEST_CASE("symmetric two-state network") {
  const auto net = ReactionNetwork::build(QMatrix::from_rows({{-1, 1}, {1, -1}}));
  CHECK(net.x_stat()[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(net.x_stat()[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(net.omega()(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(net.detailed_balance_residual() <= 1e-14);
  CHECK(net.detailed_balanced());
}

TEST_CASE("zero generator is rejected as not connected") {
  CHECK_THROWS_WITH_AS(ReactionNetwork::build(QMatrix::from_rows({{0, 0}, {0, 0}})),
                       doctest::Contains("NotConnected"), Error);
}

TEST_CASE("three-species ring with unequal rates") {
  const auto net = ReactionNetwork::build(
      QMatrix::from_rows({{-1, 1, 0}, {1, -3, 2}, {0, 2, -2}}));
  for (int i = 0; i < 3; ++i)
    CHECK(net.x_stat()[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(net.omega()(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(net.omega()(1, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("diagonal inferred from off-diagonal rows") {
  const auto q = QMatrix::from_rows({{1.0}, {2.0}});  // d = 2, diagonal omitted
  CHECK(q.entries(0, 0) == -1.0);
  CHECK(q.entries(1, 1) == -2.0);
}

TEST_CASE("detailed balance residual") {
  const auto sym = ReactionNetwork::build(QMatrix::from_rows({{-1, 1}, {1, -1}}));
  CHECK(sym.detailed_balance_residual() <= 1e-14);

  // Q = [[-1,1],[2,-2]]: x^s = (2/3, 1/3) and the residual vanishes.
  const auto asym = ReactionNetwork::build(QMatrix::from_rows({{-1, 1}, {2, -2}}));
  CHECK(asym.x_stat()[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(asym.detailed_balance_residual() <= 1e-14);

  // 3-cycle with forward rate 1, backward rate 2: no detailed balance.
  const auto rows = std::vector<std::vector<double>>{
      {-3, 1, 2}, {2, -3, 1}, {1, 2, -3}};
  CHECK_THROWS_WITH_AS(ReactionNetwork::build(QMatrix::from_rows(rows)),
                       doctest::Contains("NotDetailedBalanced"), Error);
  const auto raw = ReactionNetwork::build_raw(QMatrix::from_rows(rows));
  CHECK(!raw.detailed_balanced());
  CHECK(raw.detailed_balance_residual() > 1e-3);
}

TEST_CASE("bad rows are rejected") {
  CHECK_THROWS_WITH_AS(QMatrix::from_rows({{-1, 2}, {1, -1}}),
                       doctest::Contains("BadQMatrix"), Error);
  CHECK_THROWS_WITH_AS(QMatrix::from_rows({{-1, -1}, {1, -1}}),
                       doctest::Contains("BadQMatrix"), Error);
}

TEST_CASE("stationarity, weight row sums and nonpositive quadratic form") {
  RngStream rng(99, rng_tags::kTests, 0);
  for (int d = 2; d <= 6; ++d) {
    const auto net = random_db_network(d, rng);
    double sum = 0.0, qtx = 0.0;
    for (int i = 0; i < d; ++i) {
      sum += net.x_stat()[i];
      double r = 0.0;
      for (int j = 0; j < d; ++j) r += net.q().entries(j, i) * net.x_stat()[j];
      qtx = std::max(qtx, std::abs(r));
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    CHECK(qtx <= 1e-10);
    for (int i = 0; i < d; ++i) {
      double row = 0.0;
      for (int j = 0; j < d; ++j) row += net.omega()(i, j);
      CHECK(std::abs(row) <= 1e-12);
    }
    for (int trial = 0; trial < 100; ++trial) {
      Vec xi(d);
      for (double& v : xi) v = 2.0 * rng.uniform() - 1.0;
      double quad = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) quad += xi[i] * net.omega()(i, j) * xi[j];
      CHECK(quad <= 1e-12);
    }
  }
}
