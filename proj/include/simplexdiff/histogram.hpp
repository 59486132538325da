#pragma once

#include <cstdint>
#include <vector>

#include "simplexdiff/fokker_planck_1d.hpp"
#include "simplexdiff/linalg.hpp"

namespace simplexdiff {

// L1 distance between a histogram (uniform bins on [0,1], counts) and a
// density integrated bin-by-bin (cell overlap weighted). Bounded by 2.
double l1_histogram_density(const std::vector<int64_t>& counts, const DensityGrid1D& p);

// L1 distance of two cell densities on matching grids.
double l1_density_density(const DensityGrid1D& a, const DensityGrid1D& b);

// Two-sample Kolmogorov-Smirnov statistic (copies are sorted internally).
double ks_two_sample(Vec a, Vec b);

// One-sample KS of samples against the piecewise-constant density CDF.
double ks_sample_density(Vec samples, const DensityGrid1D& p);

// Smirnov asymptotic critical values, c(alpha) = sqrt(-ln(alpha/2)/2).
double ks_critical_two_sample(size_t n, size_t m, double alpha = 0.01);
double ks_critical_one_sample(size_t n, double alpha = 0.01);

struct MomentRow {
  double mean = 0.0;
  double variance = 0.0;
};

struct ComparisonReport {
  double l1 = 0.0;
  double ks = 0.0;
  double ks_critical = 0.0;
  double l1_threshold = 0.0;
  bool pass_l1 = false;
  bool pass_ks = false;
  MomentRow sample_moments;
  MomentRow density_moments;

  bool pass() const { return pass_l1 && pass_ks; }
};

// Histogram-vs-density comparison: L1 over shared bins plus a one-sample KS
// on the bin CDF (bin centers as atoms).
ComparisonReport compare_distributions(const std::vector<int64_t>& counts,
                                       const DensityGrid1D& density,
                                       double l1_threshold, double ks_alpha = 0.01);

MomentRow histogram_moments(const std::vector<int64_t>& counts);
MomentRow density_moments(const DensityGrid1D& p);

}  // namespace simplexdiff
