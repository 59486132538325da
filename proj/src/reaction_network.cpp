#include "simplexdiff/reaction_network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simplexdiff/errors.hpp"

namespace simplexdiff {

QMatrix QMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const int d = static_cast<int>(rows.size());
  if (d < 2) throw bad_q_matrix("need at least 2 species");
  QMatrix q;
  q.d = d;
  q.entries = Mat(d, d);
  for (int i = 0; i < d; ++i) {
    const auto& row = rows[i];
    if (static_cast<int>(row.size()) == d) {
      for (int j = 0; j < d; ++j) q.entries(i, j) = row[j];
    } else if (static_cast<int>(row.size()) == d - 1) {
      double sum = 0.0;
      int k = 0;
      for (int j = 0; j < d; ++j) {
        if (j == i) continue;
        q.entries(i, j) = row[k++];
        sum += q.entries(i, j);
      }
      q.entries(i, i) = -sum;
    } else {
      throw bad_q_matrix("row " + std::to_string(i) + " has length " +
                         std::to_string(row.size()) + ", expected " +
                         std::to_string(d) + " or " + std::to_string(d - 1));
    }
  }
  q.validate();
  return q;
}

void QMatrix::validate() const {
  const double scale = std::max(max_abs(entries), 1e-300);
  for (int i = 0; i < d; ++i) {
    double sum = 0.0;
    for (int j = 0; j < d; ++j) {
      if (j != i && entries(i, j) < 0.0)
        throw bad_q_matrix("negative off-diagonal rate Q(" + std::to_string(i) +
                           "," + std::to_string(j) + ")");
      sum += entries(i, j);
    }
    if (std::abs(sum) > 1e-12 * scale)
      throw bad_q_matrix("row " + std::to_string(i) + " sums to " + std::to_string(sum));
  }
  // Strong connectivity of the positive-rate digraph: BFS forward and backward.
  auto reaches_all = [&](bool reverse) {
    std::vector<char> seen(d, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < d; ++v) {
        if (v == u || seen[v]) continue;
        const double rate = reverse ? entries(v, u) : entries(u, v);
        if (rate > 0.0) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  if (!reaches_all(false) || !reaches_all(true))
    throw not_connected("positive-rate graph is not strongly connected");
}

SimplexState SimplexState::create(Vec values) {
  if (values.size() < 2) throw invalid_argument_error("SimplexState: need dim >= 2");
  double sum = 0.0, margin = 1.0;
  for (double v : values) {
    if (v < 0.0) throw invalid_argument_error("SimplexState: negative entry");
    sum += v;
    margin = std::min(margin, v);
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw invalid_argument_error("SimplexState: entries sum to " + std::to_string(sum));
  SimplexState s;
  s.x = std::move(values);
  s.interior_margin = margin;
  return s;
}

ReactionNetwork ReactionNetwork::build(const QMatrix& q) { return build_impl(q, true); }
ReactionNetwork ReactionNetwork::build_raw(const QMatrix& q) { return build_impl(q, false); }

ReactionNetwork ReactionNetwork::build_impl(const QMatrix& q, bool require_db) {
  q.validate();
  const int d = q.d;

  // Stationary vector from the stacked system [Q^T; 1^T] x = [0; 1].
  Mat a(d + 1, d);
  Vec b(d + 1, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = q.entries(j, i);
  for (int j = 0; j < d; ++j) a(d, j) = 1.0;
  b[d] = 1.0;
  Vec xs = least_squares(a, b);

  double residual = 0.0;
  for (int i = 0; i < d; ++i) {
    double r = 0.0;
    for (int j = 0; j < d; ++j) r += q.entries(j, i) * xs[j];
    residual = std::max(residual, std::abs(r));
  }
  const double scale = std::max(max_abs(q.entries), 1.0);
  if (residual > 1e-10 * scale)
    throw not_connected("no stationary vector: ||Q^T x|| = " + std::to_string(residual));
  for (int i = 0; i < d; ++i)
    if (xs[i] <= 0.0)
      throw not_connected("stationary vector has nonpositive component " +
                          std::to_string(i));
  double sum = 0.0;
  for (double v : xs) sum += v;
  for (double& v : xs) v /= sum;

  ReactionNetwork net;
  net.q_ = q;
  net.x_stat_ = xs;
  net.omega_ = Mat(d, d);
  double asym = 0.0, omega_scale = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      net.omega_(i, j) = q.entries(i, j) * xs[i];
      omega_scale = std::max(omega_scale, std::abs(net.omega_(i, j)));
    }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      asym = std::max(asym, std::abs(net.omega_(i, j) - net.omega_(j, i)));
  net.detailed_balanced_ = asym <= 1e-10 * std::max(omega_scale, 1e-300);
  if (require_db && !net.detailed_balanced_)
    throw not_detailed_balanced("omega asymmetry " + std::to_string(asym) +
                                " exceeds tolerance");
  if (net.detailed_balanced_) {
    // Symmetrize exactly so downstream identities hold to round-off.
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        const double w = 0.5 * (net.omega_(i, j) + net.omega_(j, i));
        net.omega_(i, j) = w;
        net.omega_(j, i) = w;
      }
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j && q.entries(i, j) > 0.0) net.edges_.emplace_back(i, j);
  return net;
}

double ReactionNetwork::detailed_balance_residual() const {
  double r = 0.0;
  for (int i = 0; i < q_.d; ++i)
    for (int j = 0; j < q_.d; ++j)
      r = std::max(r, std::abs(q_.entries(i, j) * x_stat_[i] -
                               q_.entries(j, i) * x_stat_[j]));
  return r;
}

}  // namespace simplexdiff
