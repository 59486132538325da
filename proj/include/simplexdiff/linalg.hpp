#pragma once

#include <cstddef>
#include <vector>

namespace simplexdiff {

using Vec = std::vector<double>;

// Dense row-major matrix sized for this library's needs (d <= ~32 species,
// plus small least-squares systems). Deliberately dependency-free so that
// eigenvector sign conventions and round-off are identical on every platform.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const std::vector<double>& data() const { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Vec mat_vec(const Mat& a, const Vec& x);
Mat mat_mul(const Mat& a, const Mat& b);
Mat transpose(const Mat& a);
double max_abs(const Mat& a);

// LU with partial pivoting; throws on numerically singular input.
double lu_det(Mat a);
Vec lu_solve(Mat a, Vec b);

// Least squares min ||A x - b||_2 for m >= n via Householder QR.
Vec least_squares(const Mat& a, const Vec& b);

struct SymEig {
  Vec values;   // descending
  Mat vectors;  // column l is the eigenvector of values[l]
};

// Cyclic Jacobi rotations with a deterministic sweep order. `tol` bounds the
// final off-diagonal Frobenius norm relative to the input norm.
SymEig jacobi_eigen(const Mat& a, double tol = 1e-13, int max_sweeps = 64);

}  // namespace simplexdiff
