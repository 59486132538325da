#include "simplexdiff/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace simplexdiff {

ReactionNetwork random_db_network(int d, RngStream& rng) {
  Mat w(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double v = 0.2 + 0.8 * rng.uniform();
      w(i, j) = v;
      w(j, i) = v;
    }
  Vec xs(d);
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    xs[i] = 0.2 + 0.8 * rng.uniform();
    sum += xs[i];
  }
  for (double& v : xs) v /= sum;

  std::vector<std::vector<double>> rows(d, std::vector<double>(d, 0.0));
  for (int i = 0; i < d; ++i) {
    double diag = 0.0;
    for (int j = 0; j < d; ++j) {
      if (j == i) continue;
      rows[i][j] = w(i, j) / xs[i];
      diag += rows[i][j];
    }
    rows[i][i] = -diag;
  }
  return ReactionNetwork::build(QMatrix::from_rows(rows));
}

SimplexState random_interior_state(int d, RngStream& rng) {
  Vec x(d);
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    x[i] = rng.exponential(1.0);
    sum += x[i];
  }
  double total = 0.0;
  for (int i = 0; i < d; ++i) {
    x[i] = 0.9 * x[i] / sum + 0.1 / d;
    total += x[i];
  }
  for (double& v : x) v /= total;  // mop up round-off so the sum is 1 to 1e-12
  return SimplexState::create(x);
}

GeometryResiduals geometry_residuals(const ReactionNetwork& net, const MeanFunction& mf,
                                     const SimplexState& x) {
  const int d = net.dim();
  const OnsagerDecomposition dec = build_onsager(net, mf, x);
  GeometryResiduals r;
  r.lambda_min = dec.lambdas.back();

  for (int l = 0; l < d - 1; ++l) {
    double mean = 0.0;
    for (int i = 0; i < d; ++i) {
      double ku = 0.0;
      for (int j = 0; j < d; ++j) ku += dec.K(i, j) * dec.eigvecs(j, l);
      r.eig = std::max(r.eig, std::abs(ku - dec.lambdas[l] * dec.eigvecs(i, l)));
      mean += dec.eigvecs(i, l);
    }
    r.mean_zero = std::max(r.mean_zero, std::abs(mean));
    for (int k = 0; k <= l; ++k) {
      double dot = 0.0;
      for (int i = 0; i < d; ++i) dot += dec.eigvecs(i, k) * dec.eigvecs(i, l);
      r.orthonormal = std::max(r.orthonormal, std::abs(dot - (k == l ? 1.0 : 0.0)));
    }
  }
  for (int i = 0; i < d; ++i) {
    double ke = 0.0, rowsum = 0.0;
    for (int j = 0; j < d; ++j) {
      ke += dec.K(i, j) * dec.e[j];
      rowsum += dec.K(i, j);
    }
    r.eig = std::max(r.eig, std::abs(ke));
    r.row_sum = std::max(r.row_sum, std::abs(rowsum));
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double ss = 0.0;
      for (int l = 0; l < d - 1; ++l) ss += dec.sigma(i, l) * dec.sigma(j, l);
      r.sigma = std::max(r.sigma, std::abs(ss - dec.K(i, j)));
    }

  const MetricData md = metric_tensor(dec);
  double prod = 1.0;
  for (double l : dec.lambdas) prod *= l;
  const double det_ref = d / prod;
  r.det_rel = std::abs(md.det_g - det_ref) / det_ref;
  const Mat gg = mat_mul(md.g, md.g_inv);
  for (int i = 0; i < d - 1; ++i)
    for (int j = 0; j < d - 1; ++j)
      r.metric_inv = std::max(r.metric_inv, std::abs(gg(i, j) - (i == j ? 1.0 : 0.0)));
  return r;
}

std::vector<GeometrySample> geometry_samples(const ReactionNetwork& net,
                                             const MeanFunction& mf, int samples,
                                             RngStream& rng) {
  std::vector<GeometrySample> rows;
  rows.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    GeometrySample row;
    row.x = random_interior_state(net.dim(), rng);
    const OnsagerDecomposition dec = build_onsager(net, mf, row.x);
    row.lambdas = dec.lambdas;
    row.det_g = metric_tensor(dec).det_g;
    row.residuals = geometry_residuals(net, mf, row.x);
    rows.push_back(std::move(row));
  }
  return rows;
}

GeometryCheckReport geometry_check(int d, int samples, uint64_t seed,
                                   const MeanFunction& mf) {
  GeometryCheckReport rep;
  rep.d = d;
  rep.samples = samples;
  RngStream rng(seed, rng_tags::kTests, static_cast<uint64_t>(d));
  ReactionNetwork net = random_db_network(d, rng);
  auto acc = [](double& worst, double v) { worst = std::max(worst, v); };
  bool first = true;
  for (const auto& row : geometry_samples(net, mf, samples, rng)) {
    const GeometryResiduals& r = row.residuals;
    acc(rep.worst.eig, r.eig);
    acc(rep.worst.orthonormal, r.orthonormal);
    acc(rep.worst.mean_zero, r.mean_zero);
    acc(rep.worst.sigma, r.sigma);
    acc(rep.worst.row_sum, r.row_sum);
    acc(rep.worst.det_rel, r.det_rel);
    acc(rep.worst.metric_inv, r.metric_inv);
    rep.worst.lambda_min =
        first ? r.lambda_min : std::min(rep.worst.lambda_min, r.lambda_min);
    first = false;
  }
  rep.pass = rep.worst.eig <= 1e-10 && rep.worst.orthonormal <= 1e-10 &&
             rep.worst.mean_zero <= 1e-10 && rep.worst.sigma <= 1e-10 &&
             rep.worst.det_rel <= 1e-8 && rep.worst.metric_inv <= 1e-8;
  return rep;
}

}  // namespace simplexdiff
