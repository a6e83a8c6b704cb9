#include "nopair/grid.hpp"

#include <cmath>
#include <string>

#include "nopair/errors.hpp"

namespace nopair {

namespace {

// Interval integral over [x_i, x_{i+1}] of cubic interpolants, in units of
// h / 24. Interior intervals use the centred four-point rule, the first and
// last use one-sided four-point rules.
double interval(const Vec& g, int i, int n) {
  if (n < 4) return 12.0 * (g(i) + g(i + 1));
  if (i == 0) return 9.0 * g(0) + 19.0 * g(1) - 5.0 * g(2) + g(3);
  if (i == n - 2) {
    return g(n - 4) - 5.0 * g(n - 3) + 19.0 * g(n - 2) + 9.0 * g(n - 1);
  }
  return -g(i - 1) + 13.0 * g(i) + 13.0 * g(i + 1) - g(i + 2);
}

void check_length(const RadialGrid& grid, const Vec& v, const char* what) {
  if (v.size() != grid.n) {
    throw DomainError(std::string(what) + ": expected " +
                      std::to_string(grid.n) + " samples, got " +
                      std::to_string(v.size()));
  }
}

}  // namespace

GridPtr make_log_grid(double r_min, double r_max, int n) {
  if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max)) {
    throw DomainError("make_log_grid: need 0 < r_min < r_max");
  }
  if (n < 2) throw DomainError("make_log_grid: need at least two nodes");
  auto g = std::make_shared<RadialGrid>();
  g->n = n;
  g->x0 = std::log(r_min);
  g->h = (std::log(r_max) - g->x0) / (n - 1);
  g->x.resize(n);
  g->r.resize(n);
  g->r_half.resize(n);
  for (int i = 0; i < n; ++i) {
    g->x(i) = g->x0 + i * g->h;
    g->r(i) = std::exp(g->x(i));
    g->r_half(i) = std::exp(g->x(i) + 0.5 * g->h);
  }
  g->r(0) = r_min;
  g->r(n - 1) = r_max;

  // Weights follow from summing the interval rule applied to unit vectors.
  Vec w = Vec::Zero(n);
  if (n < 4) {
    w.setConstant(1.0);
    w(0) = w(n - 1) = 0.5;
  } else {
    Vec e = Vec::Zero(n);
    for (int k = 0; k < n; ++k) {
      e.setZero();
      e(k) = 1.0;
      const int lo = std::max(0, k - 3);
      const int hi = std::min(n - 2, k + 3);
      double s = 0.0;
      for (int i = lo; i <= hi; ++i) s += interval(e, i, n);
      w(k) = s / 24.0;
    }
  }
  g->w = w.cwiseProduct(g->r) * g->h;
  return g;
}

double integrate(const RadialGrid& grid, const Vec& samples) {
  check_length(grid, samples, "integrate");
  return grid.w.dot(samples);
}

Vec cumulative_integral(const RadialGrid& grid, const Vec& samples) {
  check_length(grid, samples, "cumulative_integral");
  const int n = grid.n;
  const Vec g = samples.cwiseProduct(grid.r);
  Vec out(n);
  out(0) = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    out(i + 1) = out(i) + interval(g, i, n) * grid.h / 24.0;
  }
  return out;
}

Vec interp_node_to_half(const Vec& f) {
  const Eigen::Index n = f.size();
  Vec out(n);
  if (n < 4) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(j) = j + 1 < n ? 0.5 * (f(j) + f(j + 1)) : f(j);
    }
    return out;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j == 0) {
      out(j) = (5.0 * f(0) + 15.0 * f(1) - 5.0 * f(2) + f(3)) / 16.0;
    } else if (j == n - 2) {
      out(j) = (f(n - 4) - 5.0 * f(n - 3) + 15.0 * f(n - 2) + 5.0 * f(n - 1)) / 16.0;
    } else if (j == n - 1) {
      out(j) = -0.3125 * f(n - 4) + 1.3125 * f(n - 3) - 2.1875 * f(n - 2) +
               2.1875 * f(n - 1);
    } else {
      out(j) = (9.0 * (f(j) + f(j + 1)) - (f(j - 1) + f(j + 2))) / 16.0;
    }
  }
  return out;
}

Vec interp_half_to_node(const Vec& g) {
  const Eigen::Index n = g.size();
  auto at = [&](Eigen::Index j) { return (j >= 0 && j < n) ? g(j) : 0.0; };
  Vec out(n);
  // node i sits between half nodes i-1 and i
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i) = (9.0 * (at(i - 1) + at(i)) - (at(i - 2) + at(i + 1))) / 16.0;
  }
  return out;
}

Mat staggered_dx(int n, double h) {
  Mat d = Mat::Zero(n, n);
  const double s = 1.0 / (24.0 * h);
  for (int j = 0; j < n; ++j) {
    if (j - 1 >= 0) d(j, j - 1) += s;
    d(j, j) -= 27.0 * s;
    if (j + 1 < n) d(j, j + 1) += 27.0 * s;
    if (j + 2 < n) d(j, j + 2) -= s;
  }
  return d;
}

Mat node_to_half_matrix(int n) {
  Mat m = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    if (j - 1 >= 0) m(j, j - 1) = -1.0 / 16.0;
    m(j, j) = 9.0 / 16.0;
    if (j + 1 < n) m(j, j + 1) = 9.0 / 16.0;
    if (j + 2 < n) m(j, j + 2) = -1.0 / 16.0;
  }
  return m;
}

DerivativeMatrix derivative_matrix(const RadialGrid& grid) {
  DerivativeMatrix out;
  out.d = grid.r_half.cwiseInverse().asDiagonal() * staggered_dx(grid.n, grid.h);
  out.boundary = "staggered, zero closure outside [r_min, r_max]";
  return out;
}

}  // namespace nopair
