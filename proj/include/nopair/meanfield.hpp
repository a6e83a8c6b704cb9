#pragma once

#include <map>
#include <vector>

#include "nopair/dirac_channel.hpp"
#include "nopair/grid.hpp"

namespace nopair {

// Spherical number density stored as the radial charge q(r) = 4 pi r^2 rho(r),
// so that the electron count is int q dr.
struct RadialDensity {
  GridPtr grid;
  Vec q;

  static RadialDensity zero(GridPtr grid);
  Vec rho() const;
  double total() const;
};

RadialDensity operator+(const RadialDensity& a, const RadialDensity& b);
RadialDensity operator-(const RadialDensity& a, const RadialDensity& b);
RadialDensity operator*(double s, const RadialDensity& a);

// Density from number density samples rho(r_i).
RadialDensity density_from_rho(GridPtr grid, const Vec& rho);

// Radial charge of one normalized channel vector (u on nodes, v on half
// nodes), per electron.
Vec orbital_charge(const RadialGrid& grid, const Eigen::Ref<const Vec>& x);

struct Occupation {
  int kappa_j = -1;
  int level = 0;    // index among the retained gap states of the channel
  double nu = 0.0;  // electrons in the level, 0 <= nu <= 2 |kappa_j|
};

struct OccupationTable {
  std::vector<Occupation> entries;

  double total() const;
  double get(int kappa_j, int level) const;
};

using SpectrumSet = std::map<int, ChannelSpectrum>;

RadialDensity density_from_occupations(GridPtr grid, const SpectrumSet& spectra,
                                       const OccupationTable& occ);

// phi(r) = Q(r) / r + int_r^inf q(s) / s ds with Q the enclosed charge.
Vec hartree_potential(const RadialDensity& rho);

// D(a, b) = (1/2) int int rho_a(x) rho_b(y) / |x - y|, evaluated as
// (1/2) [int Q_a Q_b / r^2 dr + Q_a(R) Q_b(R) / R], which is symmetric and
// nonnegative on the diagonal for any discrete density.
double coulomb_inner(const RadialDensity& a, const RadialDensity& b);
double coulomb_energy(const RadialDensity& rho);

struct TraceDiagnostics {
  double kinetic_coulomb = 0.0;  // tr[(D_{c,Z} - c^2) gamma]
  double inverse_r = 0.0;        // tr[|x|^{-1} gamma]
  double abs_momentum = 0.0;     // tr[|p| gamma]
  double trace = 0.0;            // tr gamma
};

// Traces over an occupation table. The spectra may belong to any mean-field
// operator on the grid; the bare operator with nuclear charge z is used for
// the first entry.
TraceDiagnostics trace_diagnostics(GridPtr grid, const SpectrumSet& spectra,
                                   const OccupationTable& occ, double z, double c);

}  // namespace nopair
