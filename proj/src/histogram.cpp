#include "simplexdiff/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "simplexdiff/errors.hpp"

namespace simplexdiff {

namespace {

// Mass of the piecewise-constant density on [lo, hi].
double density_mass_on(const DensityGrid1D& p, double lo, double hi) {
  const double dx = p.dx();
  double mass = 0.0;
  const int m_lo = std::max(0, static_cast<int>(std::floor(lo / dx)));
  const int m_hi = std::min(p.M - 1, static_cast<int>(std::floor((hi - 1e-15) / dx)));
  for (int m = m_lo; m <= m_hi; ++m) {
    const double cell_lo = m * dx, cell_hi = (m + 1) * dx;
    const double overlap = std::min(hi, cell_hi) - std::max(lo, cell_lo);
    if (overlap > 0.0) mass += p.values[m] * overlap;
  }
  return mass;
}

}  // namespace

double l1_histogram_density(const std::vector<int64_t>& counts, const DensityGrid1D& p) {
  const int b = static_cast<int>(counts.size());
  if (b < 1) throw invalid_argument_error("l1_histogram_density: empty histogram");
  int64_t total = 0;
  for (int64_t c : counts) total += c;
  if (total <= 0) throw invalid_argument_error("l1_histogram_density: empty sample");
  double l1 = 0.0;
  for (int i = 0; i < b; ++i) {
    const double freq = static_cast<double>(counts[i]) / static_cast<double>(total);
    const double mass = density_mass_on(p, static_cast<double>(i) / b,
                                        static_cast<double>(i + 1) / b);
    l1 += std::abs(freq - mass);
  }
  // Density mass outside [0,1] cannot exist by construction; the histogram
  // support is [0,1] as well, so this is the full total variation sum.
  return l1;
}

double l1_density_density(const DensityGrid1D& a, const DensityGrid1D& b) {
  if (a.M != b.M) throw invalid_argument_error("l1_density_density: grid mismatch");
  double l1 = 0.0;
  for (int m = 0; m < a.M; ++m) l1 += std::abs(a.values[m] - b.values[m]);
  return l1 / a.M;
}

double ks_two_sample(Vec a, Vec b) {
  if (a.empty() || b.empty()) throw invalid_argument_error("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double ks_sample_density(Vec samples, const DensityGrid1D& p) {
  if (samples.empty()) throw invalid_argument_error("ks_sample_density: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double cdf = density_mass_on(p, 0.0, std::clamp(samples[i], 0.0, 1.0));
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
  }
  return d;
}

namespace {
double ks_c(double alpha) { return std::sqrt(-0.5 * std::log(alpha / 2.0)); }
}  // namespace

double ks_critical_two_sample(size_t n, size_t m, double alpha) {
  return ks_c(alpha) * std::sqrt(static_cast<double>(n + m) /
                                 (static_cast<double>(n) * static_cast<double>(m)));
}

double ks_critical_one_sample(size_t n, double alpha) {
  return ks_c(alpha) / std::sqrt(static_cast<double>(n));
}

MomentRow histogram_moments(const std::vector<int64_t>& counts) {
  const int b = static_cast<int>(counts.size());
  int64_t total = 0;
  for (int64_t c : counts) total += c;
  MomentRow row;
  if (total == 0) return row;
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < b; ++i) {
    const double x = (i + 0.5) / b;
    const double w = static_cast<double>(counts[i]) / static_cast<double>(total);
    m1 += w * x;
    m2 += w * x * x;
  }
  row.mean = m1;
  row.variance = m2 - m1 * m1;
  return row;
}

MomentRow density_moments(const DensityGrid1D& p) {
  MomentRow row;
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (int m = 0; m < p.M; ++m) {
    const double x = p.cell_center(m);
    const double w = p.values[m];
    m0 += w;
    m1 += w * x;
    m2 += w * x * x;
  }
  if (m0 == 0.0) return row;
  row.mean = m1 / m0;
  row.variance = m2 / m0 - row.mean * row.mean;
  return row;
}

ComparisonReport compare_distributions(const std::vector<int64_t>& counts,
                                       const DensityGrid1D& density,
                                       double l1_threshold, double ks_alpha) {
  ComparisonReport rep;
  rep.l1 = l1_histogram_density(counts, density);
  rep.l1_threshold = l1_threshold;
  rep.pass_l1 = rep.l1 <= l1_threshold;

  // KS on the binned CDFs (histogram bins as atoms at bin centers).
  int64_t total = 0;
  for (int64_t c : counts) total += c;
  const int b = static_cast<int>(counts.size());
  double cdf_h = 0.0, cdf_d = 0.0, d = 0.0;
  for (int i = 0; i < b; ++i) {
    cdf_h += static_cast<double>(counts[i]) / static_cast<double>(total);
    cdf_d += density_mass_on(density, static_cast<double>(i) / b,
                             static_cast<double>(i + 1) / b);
    d = std::max(d, std::abs(cdf_h - cdf_d));
  }
  rep.ks = d;
  rep.ks_critical = ks_critical_one_sample(static_cast<size_t>(total), ks_alpha);
  rep.pass_ks = rep.ks <= rep.ks_critical;
  rep.sample_moments = histogram_moments(counts);
  rep.density_moments = density_moments(density);
  return rep;
}

}  // namespace simplexdiff
