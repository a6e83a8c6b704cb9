#pragma once

#include "nopair/grid.hpp"
#include "nopair/meanfield.hpp"

namespace nopair {

// Universal screening function of the neutral atom:
//   y'' = y^{3/2} / sqrt(x),  y(0) = 1,  y(inf) = 0,
// with r = a x, a = (9 pi^2 / 128)^{1/3} Z^{-1/3}.
struct TFSolution {
  double slope = 0.0;  // b = -y'(0)
  // Large-x form y = 144 x^{-3} w(F x^{-beta}); F is fixed by matching.
  double tail_f = 0.0;
  double x_match = 10.0;
  double x_far = 1e4;
  double y_match = 0.0;   // y and y' at x_match
  double dy_match = 0.0;
  double x_max = 400.0;
  Vec x;  // samples on (0, x_max]
  Vec y;
  // Dimensionless integrals over (0, inf): sqrt(x) y^{3/2}, y^{3/2} / sqrt(x)
  // and y^{5/2} / sqrt(x).
  double norm_integral = 0.0;
  double attraction_integral = 0.0;
  double kinetic_integral = 0.0;
  double energy_coefficient = 0.0;  // E^TF(Z) / Z^{7/3}

  // y at arbitrary nonnegative points.
  Vec evaluate(const Vec& xs) const;
};

// Two-sided shooting: a series start at the origin and the large-x series,
// joined at x_match by Newton iteration on (b, F). `tol` bounds the
// matching residual.
TFSolution solve_universal(double tol = 1e-13);

// Cached solve_universal() with default tolerance.
const TFSolution& universal_solution();

// (9 pi^2 / 128)^{1/3}
double tf_length_constant();

// (3/10) (3 pi^2)^{2/3}
double tf_kinetic_constant();

struct TFEnergy {
  double kinetic = 0.0;
  double attraction = 0.0;
  double repulsion = 0.0;
  double total = 0.0;
  double electrons = 0.0;
};

TFEnergy tf_energy_components(double z);
double tf_energy(double z);

RadialDensity tf_density(double z, GridPtr grid);

// D[rho_star - rho^TF_Z] on the grid of rho_star.
double coulomb_distance(const RadialDensity& rho_star, double z);

}  // namespace nopair
