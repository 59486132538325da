#pragma once

#include <utility>
#include <vector>

#include "simplexdiff/linalg.hpp"

namespace simplexdiff {

// Generator of a continuous-time Markov chain: nonnegative off-diagonal
// rates, zero row sums, strongly connected positive-rate graph.
struct QMatrix {
  int d = 0;
  Mat entries;

  // Rows of length d are validated as-is; rows of length d-1 list the
  // off-diagonal entries in column order and the diagonal is inferred
  // from the zero row sum.
  static QMatrix from_rows(const std::vector<std::vector<double>>& rows);

  // Throws BadQMatrix / NotConnected on violated invariants.
  void validate() const;
};

// A point on the probability simplex.
struct SimplexState {
  Vec x;
  double interior_margin = 0.0;

  static SimplexState create(Vec values);
  int dim() const { return static_cast<int>(x.size()); }
  bool interior() const { return interior_margin > 0.0; }
};

// Linear reaction network with stationary vector and symmetric edge weights
// omega_ij = Q_ij x^s_i. Immutable after construction.
class ReactionNetwork {
 public:
  // Requires detailed balance (omega symmetric within 1e-10 relative).
  static ReactionNetwork build(const QMatrix& q);
  // Accepts non-detailed-balanced generators; downstream geometry modules
  // refuse such networks, only the residual diagnostic consumes them.
  static ReactionNetwork build_raw(const QMatrix& q);

  int dim() const { return q_.d; }
  const QMatrix& q() const { return q_; }
  const Vec& x_stat() const { return x_stat_; }
  const Mat& omega() const { return omega_; }
  bool detailed_balanced() const { return detailed_balanced_; }
  // Directed edges (i, j) with Q_ij > 0.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  // max_{i,j} |Q_ij x^s_i - Q_ji x^s_j|
  double detailed_balance_residual() const;

 private:
  ReactionNetwork() = default;
  static ReactionNetwork build_impl(const QMatrix& q, bool require_db);

  QMatrix q_;
  Vec x_stat_;
  Mat omega_;
  bool detailed_balanced_ = false;
  std::vector<std::pair<int, int>> edges_;
};

}  // namespace simplexdiff
