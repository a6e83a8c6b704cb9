#include "nopair/meanfield.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nopair/errors.hpp"

namespace nopair {

namespace {

void check_same_grid(const RadialDensity& a, const RadialDensity& b) {
  if (a.grid != b.grid && !(a.grid && b.grid && a.grid->n == b.grid->n &&
                            a.grid->x0 == b.grid->x0 && a.grid->h == b.grid->h)) {
    throw DomainError("densities live on different grids");
  }
}

}  // namespace

RadialDensity RadialDensity::zero(GridPtr grid) {
  const int n = grid->n;
  return {std::move(grid), Vec::Zero(n)};
}

Vec RadialDensity::rho() const {
  return q.array() / (4.0 * std::numbers::pi * grid->r.array().square());
}

double RadialDensity::total() const { return integrate(*grid, q); }

RadialDensity operator+(const RadialDensity& a, const RadialDensity& b) {
  check_same_grid(a, b);
  return {a.grid, a.q + b.q};
}

RadialDensity operator-(const RadialDensity& a, const RadialDensity& b) {
  check_same_grid(a, b);
  return {a.grid, a.q - b.q};
}

RadialDensity operator*(double s, const RadialDensity& a) { return {a.grid, s * a.q}; }

RadialDensity density_from_rho(GridPtr grid, const Vec& rho) {
  if (rho.size() != grid->n) throw DomainError("density samples do not match the grid");
  Vec q = 4.0 * std::numbers::pi * grid->r.array().square() * rho.array();
  return {std::move(grid), q};
}

Vec orbital_charge(const RadialGrid& grid, const Eigen::Ref<const Vec>& x) {
  const int n = grid.n;
  const Vec upper = x.head(n).array().square() / (grid.r.array() * grid.h);
  const Vec lower = x.tail(n).array().square() / (grid.r_half.array() * grid.h);
  return upper + interp_half_to_node(lower);
}

double OccupationTable::total() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.nu;
  return s;
}

double OccupationTable::get(int kappa_j, int level) const {
  for (const auto& e : entries) {
    if (e.kappa_j == kappa_j && e.level == level) return e.nu;
  }
  return 0.0;
}

RadialDensity density_from_occupations(GridPtr grid, const SpectrumSet& spectra,
                                       const OccupationTable& occ) {
  RadialDensity out = RadialDensity::zero(grid);
  for (const auto& e : occ.entries) {
    if (e.nu == 0.0) continue;
    auto it = spectra.find(e.kappa_j);
    if (it == spectra.end() || e.level < 0 || e.level >= it->second.gap_count()) {
      throw DomainError("occupation refers to a missing level (kappa_j = " +
                        std::to_string(e.kappa_j) + ", level " +
                        std::to_string(e.level) + ")");
    }
    out.q += e.nu * orbital_charge(*grid, it->second.gap_vector(e.level));
  }
  return out;
}

Vec hartree_potential(const RadialDensity& rho) {
  const RadialGrid& g = *rho.grid;
  const Vec enclosed = cumulative_integral(g, rho.q);
  const Vec outer_cum = cumulative_integral(g, rho.q.cwiseQuotient(g.r));
  const Vec outer = outer_cum(g.n - 1) - outer_cum.array();
  return enclosed.cwiseQuotient(g.r) + outer;
}

double coulomb_inner(const RadialDensity& a, const RadialDensity& b) {
  check_same_grid(a, b);
  const RadialGrid& g = *a.grid;
  const Vec qa = cumulative_integral(g, a.q);
  const Vec qb = cumulative_integral(g, b.q);
  const Vec f = qa.cwiseProduct(qb).cwiseQuotient(g.r.cwiseAbs2());
  return 0.5 * (integrate(g, f) + qa(g.n - 1) * qb(g.n - 1) / g.r_max());
}

double coulomb_energy(const RadialDensity& rho) { return coulomb_inner(rho, rho); }

TraceDiagnostics trace_diagnostics(GridPtr grid, const SpectrumSet& spectra,
                                   const OccupationTable& occ, double z, double c) {
  TraceDiagnostics t;
  std::map<int, std::vector<const Occupation*>> by_channel;
  for (const auto& e : occ.entries) {
    if (e.nu != 0.0) by_channel[e.kappa_j].push_back(&e);
  }
  const RadialPotential bare = coulomb_potential(*grid, z);
  for (const auto& [kj, list] : by_channel) {
    auto it = spectra.find(kj);
    if (it == spectra.end()) throw DomainError("trace_diagnostics: missing channel");
    const ChannelSpectrum& s = it->second;
    const ChannelOperator d0 = assemble_channel(grid, kj, c, bare, s.op.b);
    const FreeChannel free(grid, kj, c, s.op.b);
    Mat x(2 * grid->n, static_cast<Eigen::Index>(list.size()));
    for (size_t k = 0; k < list.size(); ++k) x.col(k) = s.gap_vector(list[k]->level);
    const Mat dx = d0.apply(x);
    const Mat px = free.apply_abs_momentum(x);
    for (size_t k = 0; k < list.size(); ++k) {
      const double nu = list[k]->nu;
      t.kinetic_coulomb += nu * (x.col(k).dot(dx.col(k)) - c * c);
      t.abs_momentum += nu * x.col(k).dot(px.col(k));
      t.inverse_r += nu * integrate(*grid, orbital_charge(*grid, x.col(k)).cwiseQuotient(grid->r));
      t.trace += nu;
    }
  }
  return t;
}

}  // namespace nopair
