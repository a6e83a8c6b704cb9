#pragma once

#include <memory>
#include <string>

#include "nopair/linalg.hpp"

namespace nopair {

// Logarithmic radial grid x = ln r with uniform step h. Upper Dirac
// components live on the nodes x_i, lower components on the half nodes
// x_i + h/2.
struct RadialGrid {
  int n = 0;
  double x0 = 0.0;
  double h = 0.0;
  Vec x;
  Vec r;       // nodes, r(0) = r_min, r(n-1) = r_max
  Vec r_half;  // exp(x_i + h/2)
  Vec w;       // quadrature weights: sum_i w_i f(r_i) ~ int_{r_min}^{r_max} f dr

  double r_min() const { return r(0); }
  double r_max() const { return r(n - 1); }
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_log_grid(double r_min, double r_max, int n);

// sum_i w_i f_i
double integrate(const RadialGrid& grid, const Vec& samples);

// F_i = int_{r_0}^{r_i} f dr with the same interval rule as the weights,
// so F_{n-1} equals integrate(grid, f).
Vec cumulative_integral(const RadialGrid& grid, const Vec& samples);

// Cubic interpolation from nodes to half nodes with one-sided stencils at
// both ends (the last half node is extrapolated). Suitable for potentials.
Vec interp_node_to_half(const Vec& f);

// Cubic interpolation from half nodes back to nodes, treating values
// outside the grid as zero. Suitable for quantities that vanish at both
// ends (orbital densities).
Vec interp_half_to_node(const Vec& g);

// Staggered fourth-order d/dx from nodes to half nodes; values outside the
// grid are zero (Dirichlet closure).
Mat staggered_dx(int n, double h);

// (-1, 9, 9, -1) / 16 interpolation from nodes to half nodes with the same
// zero closure as staggered_dx.
Mat node_to_half_matrix(int n);

struct DerivativeMatrix {
  Mat d;  // n x n, maps node samples to d/dr at the half nodes
  std::string boundary;
};

DerivativeMatrix derivative_matrix(const RadialGrid& grid);

}  // namespace nopair
