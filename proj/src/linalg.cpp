#include "nopair/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "nopair/errors.hpp"

namespace nopair {

namespace {

void check_info(lapack_int info, const char* routine, int n) {
  if (info != 0) {
    throw NumericError(std::string(routine) + " failed with info=" +
                       std::to_string(info) + " (matrix order " +
                       std::to_string(n) + ")");
  }
}

void check_square(const Mat& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DomainError(std::string(what) + ": matrix is not square");
  }
  if (!a.allFinite()) {
    throw DomainError(std::string(what) + ": matrix has non-finite entries");
  }
}

}  // namespace

double& BandMatrix::at(int i, int j) { return ab(i - j, j); }

Mat BandMatrix::dense() const {
  Mat a = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int d = 0; d <= kd && j + d < n; ++d) {
      a(j + d, j) = ab(d, j);
      a(j, j + d) = ab(d, j);
    }
  }
  return a;
}

Vec BandMatrix::multiply(const Vec& x) const {
  Vec y = Vec::Zero(n);
  for (int j = 0; j < n; ++j) {
    y(j) += ab(0, j) * x(j);
    for (int d = 1; d <= kd && j + d < n; ++d) {
      y(j + d) += ab(d, j) * x(j);
      y(j) += ab(d, j) * x(j + d);
    }
  }
  return y;
}

EigenPairs sym_eig(const Mat& a) {
  check_square(a, "sym_eig");
  const int n = static_cast<int>(a.rows());
  EigenPairs out;
  out.vectors = a;
  out.values.resize(n);
  if (n == 0) return out;
  lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                   out.vectors.data(), n, out.values.data());
  check_info(info, "dsyevd", n);
  return out;
}

Vec sym_eigvals(const Mat& a) {
  check_square(a, "sym_eigvals");
  const int n = static_cast<int>(a.rows());
  Mat work = a;
  Vec w(n);
  if (n == 0) return w;
  lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, w.data());
  check_info(info, "dsyevd", n);
  return w;
}

EigenPairs sym_eig_range(const Mat& a, double lo, double hi) {
  check_square(a, "sym_eig_range");
  const int n = static_cast<int>(a.rows());
  Mat work = a;
  Vec w(n);
  Mat z(n, std::max(n, 1));
  std::vector<lapack_int> isuppz(2 * std::max(n, 1));
  lapack_int m = 0;
  EigenPairs out;
  if (n == 0) return out;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'V', 'L', n,
                                   work.data(), n, lo, hi, 0, 0, abstol, &m,
                                   w.data(), z.data(), n, isuppz.data());
  check_info(info, "dsyevr", n);
  out.values = w.head(m);
  out.vectors = z.leftCols(m);
  return out;
}

EigenPairs band_eig(const BandMatrix& a) {
  const int n = a.n;
  EigenPairs out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  if (n == 0) return out;
  if (!a.ab.allFinite()) throw DomainError("band_eig: non-finite entries");
  Mat ab = a.ab;
  lapack_int info = LAPACKE_dsbevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.kd,
                                   ab.data(), a.kd + 1, out.values.data(),
                                   out.vectors.data(), n);
  check_info(info, "dsbevd", n);
  return out;
}

EigenPairs band_eig_range(const BandMatrix& a, double lo, double hi) {
  const int n = a.n;
  EigenPairs out;
  if (n == 0) return out;
  if (!a.ab.allFinite()) throw DomainError("band_eig_range: non-finite entries");
  // Values by bisection on the reduced tridiagonal form; asking LAPACK for
  // vectors here would build the dense n x n reduction matrix, so vectors
  // come from banded inverse iteration instead.
  Mat ab = a.ab;
  Vec w(n);
  double qdummy = 0.0;
  std::vector<lapack_int> ifail(n);
  lapack_int m = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  lapack_int info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'V', 'L', n, a.kd,
                                   ab.data(), a.kd + 1, &qdummy, 1, lo, hi, 0,
                                   0, abstol, &m, w.data(), nullptr, 1,
                                   ifail.data());
  check_info(info, "dsbevx", n);
  out.values = w.head(m);
  out.vectors.resize(n, m);

  const int kd = a.kd;
  const int ldab = 3 * kd + 1;
  const double scale = a.ab.cwiseAbs().maxCoeff();
  std::vector<lapack_int> ipiv(n);
  for (lapack_int k = 0; k < m; ++k) {
    double shift = out.values(k);
    Mat lu = Mat::Zero(ldab, n);
    auto fill = [&](double s) {
      lu.setZero();
      for (int j = 0; j < n; ++j) {
        for (int i = j; i <= std::min(n - 1, j + kd); ++i) {
          const double v = a.ab(i - j, j) - (i == j ? s : 0.0);
          lu(2 * kd + i - j, j) = v;
          if (i != j) lu(2 * kd + j - i, i) = v;
        }
      }
    };
    fill(shift);
    info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kd, kd, lu.data(), ldab, ipiv.data());
    if (info > 0) {
      shift += 64.0 * std::numeric_limits<double>::epsilon() * scale;
      fill(shift);
      info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kd, kd, lu.data(), ldab, ipiv.data());
    }
    check_info(info, "dgbtrf", n);
    Vec x(n);
    for (int i = 0; i < n; ++i) x(i) = 1.0 + 0.5 * std::sin(1.7 * i + 0.3 * k);
    for (int it = 0; it < 4; ++it) {
      // Keep nearly degenerate partners apart.
      for (lapack_int p = 0; p < k; ++p) {
        if (std::abs(out.values(p) - out.values(k)) < 1e-8 * scale) {
          x -= out.vectors.col(p).dot(x) * out.vectors.col(p);
        }
      }
      x.normalize();
      info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kd, kd, 1, lu.data(), ldab,
                            ipiv.data(), x.data(), n);
      check_info(info, "dgbtrs", n);
      if (!x.allFinite()) throw NumericError("band_eig_range: inverse iteration diverged");
    }
    for (lapack_int p = 0; p < k; ++p) {
      if (std::abs(out.values(p) - out.values(k)) < 1e-8 * scale) {
        x -= out.vectors.col(p).dot(x) * out.vectors.col(p);
      }
    }
    out.vectors.col(k) = x.normalized();
  }
  return out;
}

Svd svd(const Mat& a) {
  if (!a.allFinite()) throw DomainError("svd: non-finite entries");
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  const int k = std::min(m, n);
  Svd out;
  Mat work = a;
  out.s.resize(k);
  out.u.resize(m, k);
  Mat vt(k, n);
  if (k == 0) return out;
  lapack_int info =
      LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', m, n, work.data(), m,
                     out.s.data(), out.u.data(), m, vt.data(), k);
  check_info(info, "dgesdd", k);
  out.v = vt.transpose();
  return out;
}

Mat sym_function(const EigenPairs& e, const std::function<double(double)>& f) {
  Vec fv = e.values.unaryExpr(f);
  return e.vectors * fv.asDiagonal() * e.vectors.transpose();
}

double trace_norm_sym(const Mat& a) {
  Mat s = 0.5 * (a + a.transpose());
  return sym_eigvals(s).cwiseAbs().sum();
}

double trace_norm_factored(const Mat& x, const Mat& c) {
  if (x.cols() == 0) return 0.0;
  if (x.rows() <= x.cols()) {
    return trace_norm_sym(x * c * x.transpose());
  }
  Eigen::HouseholderQR<Mat> qr(x);
  const Eigen::Index k = x.cols();
  Mat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return trace_norm_sym(r * c * r.transpose());
}

}  // namespace nopair
