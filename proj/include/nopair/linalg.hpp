#pragma once

#include <Eigen/Dense>
#include <functional>

namespace nopair {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct EigenPairs {
  Vec values;   // ascending
  Mat vectors;  // orthonormal columns
};

// Symmetric band matrix in LAPACK lower storage: ab(i - j, j) = A(i, j)
// for j <= i <= j + kd.
struct BandMatrix {
  int n = 0;
  int kd = 0;
  Mat ab;

  BandMatrix() = default;
  BandMatrix(int n_, int kd_) : n(n_), kd(kd_), ab(Mat::Zero(kd_ + 1, n_)) {}
  double& at(int i, int j);  // requires i >= j
  Mat dense() const;
  Vec multiply(const Vec& x) const;
};

// Full symmetric eigendecomposition (divide and conquer).
EigenPairs sym_eig(const Mat& a);
Vec sym_eigvals(const Mat& a);

// Eigenpairs with values in the half-open window (lo, hi].
EigenPairs sym_eig_range(const Mat& a, double lo, double hi);

EigenPairs band_eig(const BandMatrix& a);
EigenPairs band_eig_range(const BandMatrix& a, double lo, double hi);

struct Svd {
  Mat u;
  Vec s;  // descending
  Mat v;
};
Svd svd(const Mat& a);

// f(A) for symmetric A given its eigendecomposition.
Mat sym_function(const EigenPairs& e, const std::function<double(double)>& f);

// Sum of absolute eigenvalues of a symmetric matrix.
double trace_norm_sym(const Mat& a);

// Trace norm of X C X^T for symmetric C without forming the outer product.
double trace_norm_factored(const Mat& x, const Mat& c);

}  // namespace nopair
