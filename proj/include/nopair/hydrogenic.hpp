#pragma once

#include <vector>

#include "nopair/grid.hpp"
#include "nopair/linalg.hpp"

namespace nopair {

// All energies here use units with c = 1 (rest energy 1) and a point
// nucleus of coupling kappa = Z / c, unless a value of c is passed.

// Sommerfeld fine-structure energy of principal number n in channel kappa_j.
double dirac_level(double kappa, int n, int kappa_j);
// Same level in Hartree for speed of light c (c^2 times the scaled value).
double dirac_level(double kappa, int n, int kappa_j, double c);
// dirac_level - 1 without cancellation.
double dirac_binding(double kappa, int n, int kappa_j);

// Nonrelativistic hydrogen level plus rest energy: 1 - kappa^2 / (2 n^2).
double schrodinger_level(double kappa, int n);

// Channels kappa_j allowed at principal number n: -1..-n and 1..n-1.
std::vector<int> shell_channels(int n);

struct LevelEntry {
  int n = 1;
  int kappa_j = -1;
  double energy = 0.0;
  int multiplicity = 2;
};

struct LevelTable {
  std::vector<LevelEntry> entries;  // sorted by energy
};

LevelTable dirac_level_table(double kappa, int n_max);

struct ScottEstimate {
  double kappa = 0.0;
  double estimate = 0.0;
  double tail_error = 0.0;
  int n_max = 0;
};

// Partial sums S(n) = kappa^{-2} sum_{shells <= n} (lambda^D - lambda^S) + 1/2
// weighted by state multiplicity.
std::vector<double> scott_furry_partial_sums(double kappa, int n_max);

// Richardson extrapolation of the partial sums with the model
// S(n) = S + a / n + b / n^2 from n_max / 4, n_max / 2 and n_max.
ScottEstimate scott_furry(double kappa, int n_max);

// Gap eigenvalues of the free-projected operator Lambda+ D_kappa Lambda+ on
// the given grid (c = 1).
Vec br_channel_spectrum(GridPtr grid, double kappa, int kappa_j);

// Gap eigenvalues of the discretized Dirac-Coulomb operator itself on the
// same grid (c = 1), for like-for-like comparison with the projected ones.
Vec dirac_channel_levels(GridPtr grid, double kappa, int kappa_j);

struct ScottBrEstimate {
  ScottEstimate furry;
  double estimate = 0.0;
  double tail_error = 0.0;
  double correction = 0.0;  // kappa^{-2} sum mult (lambda^BR - lambda^D)
  int levels = 0;
  int kmax = 0;
};

// Furry value plus the multiplicity-weighted level shifts between the
// projected and the unprojected operator for |kappa_j| <= kmax and the
// lowest `levels` states per channel, with a 1/n^3 tail per channel.
ScottBrEstimate scott_br(double kappa, GridPtr grid, int n_max, int levels = 12,
                         int kmax = 3);

}  // namespace nopair
