#include "simplexdiff/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "simplexdiff/errors.hpp"

namespace simplexdiff {

Vec mat_vec(const Mat& a, const Vec& x) {
  Vec y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Mat mat_mul(const Mat& a, const Mat& b) {
  Mat c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Mat transpose(const Mat& a) {
  Mat t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

double max_abs(const Mat& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// In-place LU with partial pivoting; returns the permutation sign, or 0 if
// a pivot underflows (singular to working precision).
int lu_factor(Mat& a, std::vector<int>& piv) {
  const int n = a.rows();
  piv.resize(n);
  std::iota(piv.begin(), piv.end(), 0);
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) return 0;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
      std::swap(piv[p], piv[k]);
      sign = -sign;
    }
    const double pivot = a(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double m = a(i, k) / pivot;
      a(i, k) = m;
      for (int j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
    }
  }
  return sign;
}

}  // namespace

double lu_det(Mat a) {
  std::vector<int> piv;
  const int sign = lu_factor(a, piv);
  if (sign == 0) return 0.0;
  double det = sign;
  for (int i = 0; i < a.rows(); ++i) det *= a(i, i);
  return det;
}

Vec lu_solve(Mat a, Vec b) {
  const int n = a.rows();
  std::vector<int> piv;
  if (lu_factor(a, piv) == 0) throw Error("SingularMatrix", "lu_solve: singular matrix");
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = b[piv[i]];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) x[i] -= a(i, j) * x[j];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[i] -= a(i, j) * x[j];
    x[i] /= a(i, i);
  }
  return x;
}

Vec least_squares(const Mat& a, const Vec& b) {
  const int m = a.rows(), n = a.cols();
  if (m < n) throw invalid_argument_error("least_squares: underdetermined system");
  Mat r = a;
  Vec y = b;
  // Householder QR applied to [A | b].
  for (int k = 0; k < n; ++k) {
    double norm = 0.0;
    for (int i = k; i < m; ++i) norm += r(i, k) * r(i, k);
    norm = std::sqrt(norm);
    if (norm == 0.0) throw Error("SingularMatrix", "least_squares: rank-deficient matrix");
    const double alpha = (r(k, k) > 0.0) ? -norm : norm;
    Vec v(m, 0.0);
    v[k] = r(k, k) - alpha;
    for (int i = k + 1; i < m; ++i) v[i] = r(i, k);
    double vtv = 0.0;
    for (int i = k; i < m; ++i) vtv += v[i] * v[i];
    if (vtv == 0.0) continue;
    for (int j = k; j < n; ++j) {
      double dot = 0.0;
      for (int i = k; i < m; ++i) dot += v[i] * r(i, j);
      const double c = 2.0 * dot / vtv;
      for (int i = k; i < m; ++i) r(i, j) -= c * v[i];
    }
    double dot = 0.0;
    for (int i = k; i < m; ++i) dot += v[i] * y[i];
    const double c = 2.0 * dot / vtv;
    for (int i = k; i < m; ++i) y[i] -= c * v[i];
  }
  Vec x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int j = i + 1; j < n; ++j) s -= r(i, j) * x[j];
    x[i] = s / r(i, i);
  }
  return x;
}

SymEig jacobi_eigen(const Mat& a, double tol, int max_sweeps) {
  const int n = a.rows();
  Mat d = a;
  Mat v = Mat::identity(n);
  double base = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) base += d(i, j) * d(i, j);
  base = std::sqrt(base);
  const double target = tol * std::max(base, 1e-300);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += 2.0 * d(p, q) * d(p, q);
    if (std::sqrt(off) <= target) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = d(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double app = d(p, p), aqq = d(q, q);
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double dkp = d(k, p), dkq = d(k, q);
          d(k, p) = c * dkp - s * dkq;
          d(k, q) = s * dkp + c * dkq;
        }
        for (int k = 0; k < n; ++k) {
          const double dpk = d(p, k), dqk = d(q, k);
          d(p, k) = c * dpk - s * dqk;
          d(q, k) = s * dpk + c * dqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return d(i, i) > d(j, j); });
  SymEig out;
  out.values.resize(n);
  out.vectors = Mat(n, n);
  for (int l = 0; l < n; ++l) {
    out.values[l] = d(order[l], order[l]);
    for (int k = 0; k < n; ++k) out.vectors(k, l) = v(k, order[l]);
  }
  return out;
}

}  // namespace simplexdiff
