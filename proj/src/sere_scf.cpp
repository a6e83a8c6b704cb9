#include "nopair/sere_scf.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "nopair/constants.hpp"
#include "nopair/errors.hpp"

namespace nopair {

namespace {

struct Level {
  int kappa_j;
  int level;
  double lambda;
  double cap;
};

std::vector<Level> sorted_levels(const SpectrumSet& spectra) {
  std::vector<Level> out;
  for (const auto& [kj, s] : spectra) {
    for (int k = 0; k < s.gap_count(); ++k) {
      out.push_back({kj, k, s.gap_value(k), 2.0 * std::abs(kj)});
    }
  }
  std::sort(out.begin(), out.end(), [](const Level& a, const Level& b) {
    return std::tie(a.lambda, a.kappa_j, a.level) < std::tie(b.lambda, b.kappa_j, b.level);
  });
  return out;
}

// Euclidean projection onto {0 <= x <= cap, sum x = total}.
Vec project_capped_simplex(const Vec& v, const Vec& cap, double total) {
  if (total <= 0.0) return Vec::Zero(v.size());
  if (total >= cap.sum()) return cap;
  double lo = (v - cap).minCoeff() - 1.0;
  double hi = v.maxCoeff() + 1.0;
  auto clipped = [&](double m) {
    return (v.array() - m).max(0.0).min(cap.array()).matrix().eval();
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (clipped(mid).sum() > total) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return clipped(0.5 * (lo + hi));
}

// min g.(x - x0) + 1/2 (x - x0)^T J (x - x0) over the capped simplex.
Vec occupation_qp(const Vec& g, const Mat& j, const Vec& x0, const Vec& cap, double total) {
  const double lip = std::max(sym_eigvals(j).maxCoeff(), 0.0) + 1e-12;
  Vec x = x0;
  for (int it = 0; it < 3000; ++it) {
    const Vec grad = g + j * (x - x0);
    const Vec next = project_capped_simplex(x - grad / lip, cap, total);
    const double step = (next - x).lpNorm<Eigen::Infinity>();
    x = next;
    if (step < 1e-15) break;
  }
  return x;
}

// Snaps nearly empty or full levels and puts any rounding remainder on the
// level with the most room, so that the occupations sum to `total`.
void tidy_occupations(Vec& x, const Vec& cap, double total) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) < 1e-13) x(i) = 0.0;
    if (x(i) > cap(i) - 1e-13) x(i) = cap(i);
  }
  const double rest = total - x.sum();
  if (rest == 0.0 || x.size() == 0) return;
  Eigen::Index best = 0;
  double room = -1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double r = rest > 0.0 ? cap(i) - x(i) : x(i);
    if (x(i) > 0.0 && x(i) < cap(i) && r > room) {
      room = r;
      best = i;
    }
  }
  if (room < 0.0) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double r = rest > 0.0 ? cap(i) - x(i) : x(i);
      if (r > room) {
        room = r;
        best = i;
      }
    }
  }
  x(best) += rest;
}

double mean_field_expectation(const RadialPotential& phi, const Eigen::Ref<const Vec>& x) {
  const Eigen::Index n = phi.node.size();
  return (phi.node.array() * x.head(n).array().square()).sum() +
         (phi.half.array() * x.tail(n).array().square()).sum();
}

void check_cutoff(const SpectrumSet& spectra, const OccupationTable& occ, int kmax) {
  (void)spectra;
  for (const auto& e : occ.entries) {
    if (e.nu > 0.0 && std::abs(e.kappa_j) >= kmax) {
      throw DomainError("occupied level in channel kappa_j = " + std::to_string(e.kappa_j) +
                        " at the channel cutoff; raise kmax");
    }
  }
}

}  // namespace

int default_kmax(double n_electrons) {
  if (n_electrons <= 2.0) return 2;
  if (n_electrons <= 18.0) return 3;
  if (n_electrons <= 54.0) return 4;
  return 5;
}

int ScfConfig::channel_cutoff() const { return kmax > 0 ? kmax : default_kmax(electrons()); }

void ScfConfig::validate() const {
  if (!(z > 0.0)) throw ConfigError("Z must be positive");
  if (!(kappa > 0.0 && kappa < 1.0)) throw ConfigError("kappa must lie in (0, 1)");
  const double n = electrons();
  if (!(n >= 1.0 && n <= z + 1e-12)) throw ConfigError("N must satisfy 1 <= N <= Z");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (grid.n < 50) throw ConfigError("grid.n must be at least 50");
  if (grid.r_min < 0.0 || grid.r_max < 0.0) throw ConfigError("grid radii must be positive");
  if (grid.r_min > 0.0 && grid.r_max > 0.0 && grid.r_min >= grid.r_max) {
    throw ConfigError("grid.r_min must be below grid.r_max");
  }
  if (!(tol_energy > 0.0 && tol_density > 0.0)) throw ConfigError("tolerances must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
  if (levels_per_channel < 1) throw ConfigError("levels_per_channel must be >= 1");
  if (kmax < 0) throw ConfigError("kmax must be >= 0");
}

GridPtr make_scf_grid(const ScfConfig& cfg) {
  const double r_min = cfg.grid.r_min > 0.0 ? cfg.grid.r_min : 1e-5 / cfg.z;
  const double r_max = cfg.grid.r_max > 0.0 ? cfg.grid.r_max : std::max(60.0 / cfg.z, 40.0);
  return make_log_grid(r_min, r_max, cfg.grid.n);
}

ChannelBasis::ChannelBasis(GridPtr grid, int kmax) : grid_(std::move(grid)), kmax_(kmax) {
  if (kmax < 1) throw DomainError("ChannelBasis: kmax must be >= 1");
  for (int k = -kmax; k <= kmax; ++k) {
    if (k == 0) continue;
    kappas_.push_back(k);
    blocks_[k] = std::make_shared<const Mat>(kinetic_block(*grid_, k));
  }
}

std::shared_ptr<const Mat> ChannelBasis::block(int kappa_j) const {
  auto it = blocks_.find(kappa_j);
  if (it == blocks_.end()) {
    throw DomainError("channel " + std::to_string(kappa_j) + " is outside the basis");
  }
  return it->second;
}

const FreeChannel& ChannelBasis::free(int kappa_j, double c) const {
  if (c != free_c_) {
    free_.clear();
    free_c_ = c;
  }
  auto& slot = free_[kappa_j];
  if (!slot) slot = std::make_unique<FreeChannel>(grid_, kappa_j, c, block(kappa_j));
  return *slot;
}

MeanField mean_field_operator(const RadialDensity& rho, const ScfConfig& cfg,
                              const ChannelBasis& basis) {
  const GridPtr& grid = basis.grid();
  if (rho.q.size() != grid->n) throw DomainError("density does not match the SCF grid");
  if (rho.total() > cfg.electrons() * (1.0 + 1e-8) + 1e-10) {
    throw DomainError("density holds more than N electrons");
  }
  MeanField mf;
  mf.phi = cfg.fermi_amaldi() * hartree_potential(rho);
  mf.total = coulomb_potential(*grid, cfg.z) + potential_from_samples(*grid, mf.phi);
  for (int kj : basis.kappas()) {
    if (static_cast<double>(kj) * kj <= cfg.kappa * cfg.kappa) {
      mf.excluded.push_back(kj);
      continue;
    }
    mf.channels.push_back(assemble_channel(grid, kj, cfg.c(), mf.total, basis.block(kj)));
  }
  return mf;
}

SpectrumSet diagonalize_channels(const MeanField& mf, int max_levels) {
  SpectrumSet out;
  for (const auto& op : mf.channels) out.emplace(op.kappa_j, diagonalize_gap(op, max_levels));
  return out;
}

OccupationTable aufbau(const SpectrumSet& spectra, double n_electrons, double degeneracy_tol) {
  OccupationTable occ;
  if (n_electrons <= 0.0) return occ;
  const std::vector<Level> levels = sorted_levels(spectra);
  const double c = spectra.empty() ? 1.0 : spectra.begin()->second.c();
  const double tol = degeneracy_tol * c * c;
  double rest = n_electrons;
  size_t i = 0;
  while (rest > 0.0) {
    if (i >= levels.size()) {
      throw NumericError("aufbau: " + std::to_string(n_electrons) +
                         " electrons exceed the bound states of the basis");
    }
    size_t j = i;
    double cap = 0.0;
    while (j < levels.size() && levels[j].lambda - levels[i].lambda <= tol) {
      cap += levels[j].cap;
      ++j;
    }
    const bool full = cap <= rest;
    for (size_t k = i; k < j; ++k) {
      const double nu = full ? levels[k].cap : rest * levels[k].cap / cap;
      occ.entries.push_back({levels[k].kappa_j, levels[k].level, nu});
    }
    rest = full ? rest - cap : 0.0;
    i = j;
  }
  // Exact particle count despite the proportional split.
  const double defect = n_electrons - occ.total();
  if (defect != 0.0) occ.entries.back().nu += defect;
  return occ;
}

double fermi_level(const SpectrumSet& spectra, const OccupationTable& occ) {
  double mu = -INFINITY;
  for (const auto& e : occ.entries) {
    if (e.nu <= 0.0) continue;
    mu = std::max(mu, spectra.at(e.kappa_j).gap_value(e.level));
  }
  return mu;
}

EnergyRecord energy(const SpectrumSet& spectra, const OccupationTable& occ,
                    const ScfConfig& cfg, const ChannelBasis& basis) {
  EnergyRecord e;
  const GridPtr& grid = basis.grid();
  const RadialPotential bare = coulomb_potential(*grid, cfg.z);
  const double c = cfg.c();
  for (const auto& entry : occ.entries) {
    if (entry.nu == 0.0) continue;
    const ChannelSpectrum& s = spectra.at(entry.kappa_j);
    const ChannelOperator d0 = assemble_channel(grid, entry.kappa_j, c, bare, s.op.b);
    e.kinetic_coulomb += entry.nu * (d0.rayleigh(s.gap_vector(entry.level)) - c * c);
  }
  e.hartree = coulomb_energy(density_from_occupations(grid, spectra, occ));
  e.e_ha = e.kinetic_coulomb + cfg.fermi_amaldi() * e.hartree;
  e.e_h = e.kinetic_coulomb + e.hartree;
  return e;
}

namespace {

void finalize_state(ScfState& st, const RadialDensity& rho_star) {
  const ScfConfig& cfg = st.cfg;
  st.rho = rho_star;
  const MeanField mf = mean_field_operator(rho_star, cfg, *st.basis);
  st.phi = mf.phi;
  SpectrumSet spectra = diagonalize_channels(mf, cfg.levels_per_channel);
  // Occupations carry over by label; a level that vanished from the
  // retained set would make the state inconsistent.
  for (const auto& e : st.occ.entries) {
    if (e.nu > 0.0 && e.level >= spectra.at(e.kappa_j).gap_count()) {
      throw NumericError("occupied level disappeared from the final spectrum");
    }
  }
  st.spectra = std::move(spectra);
  st.mu = fermi_level(st.spectra, st.occ);
  st.energies = energy(st.spectra, st.occ, cfg, *st.basis);
}

}  // namespace

ScfState scf_solve(const ScfConfig& cfg, const RadialDensity* seed) {
  cfg.validate();
  ScfState st;
  st.cfg = cfg;
  st.basis = std::make_shared<const ChannelBasis>(make_scf_grid(cfg), cfg.channel_cutoff());
  const GridPtr grid = st.basis->grid();
  const double n_el = cfg.electrons();
  const double s = cfg.fermi_amaldi();
  const double c = cfg.c();

  const ExclusionConstants ex = exclusion_constant_default(cfg.kappa);
  if (cfg.z <= ex.c_ex) {
    st.warnings.push_back("Z = " + std::to_string(cfg.z) +
                          " is not above the exclusion threshold " + std::to_string(ex.c_ex));
  }

  RadialDensity q = seed ? *seed : RadialDensity::zero(grid);
  if (q.grid->n != grid->n) throw DomainError("seed density does not match the SCF grid");
  q.grid = grid;
  OccupationTable occ;
  bool have_occ = false;
  double e_old = 0.0;
  bool warned_monotone = false;
  RadialDensity q_out = q;

  for (int it = 0; it < cfg.max_iter; ++it) {
    const MeanField mf = mean_field_operator(q, cfg, *st.basis);
    const SpectrumSet spectra = diagonalize_channels(mf, cfg.levels_per_channel);
    const OccupationTable au = aufbau(spectra, n_el, cfg.degeneracy_tol);

    if (cfg.occupations == OccupationMode::Aufbau || !have_occ) {
      occ = au;
    } else {
      const std::vector<Level> levels = sorted_levels(spectra);
      const double mu = fermi_level(spectra, au);
      std::vector<int> window;
      OccupationTable next;
      double fixed = 0.0;
      for (size_t i = 0; i < levels.size(); ++i) {
        const Level& l = levels[i];
        if (std::abs(l.lambda - mu) < cfg.fermi_window) {
          window.push_back(static_cast<int>(i));
        } else if (l.lambda < mu) {
          next.entries.push_back({l.kappa_j, l.level, l.cap});
          fixed += l.cap;
        }
      }
      const int m = static_cast<int>(window.size());
      Vec lam(m), cap(m), prev(m);
      std::vector<RadialDensity> dens;
      for (int a = 0; a < m; ++a) {
        const Level& l = levels[window[a]];
        lam(a) = l.lambda;
        cap(a) = l.cap;
        prev(a) = occ.get(l.kappa_j, l.level);
        dens.push_back({grid, orbital_charge(*grid, spectra.at(l.kappa_j).gap_vector(l.level))});
      }
      Mat jm(m, m);
      for (int a = 0; a < m; ++a) {
        for (int b = a; b < m; ++b) jm(a, b) = jm(b, a) = 2.0 * s * coulomb_inner(dens[a], dens[b]);
      }
      const double total = n_el - fixed;
      const Vec start = project_capped_simplex(prev, cap, total);
      Vec x = occupation_qp(lam, jm, start, cap, total);
      tidy_occupations(x, cap, total);
      for (int a = 0; a < m; ++a) {
        if (x(a) > 0.0) {
          next.entries.push_back({levels[window[a]].kappa_j, levels[window[a]].level, x(a)});
        }
      }
      occ = std::move(next);
    }
    have_occ = true;
    check_cutoff(spectra, occ, st.basis->kmax());

    q_out = density_from_occupations(grid, spectra, occ);
    const RadialPotential phi_pot = potential_from_samples(*grid, mf.phi);
    double e = 0.0;
    for (const auto& entry : occ.entries) {
      if (entry.nu == 0.0) continue;
      const ChannelSpectrum& sp = spectra.at(entry.kappa_j);
      const Vec x = sp.gap_vector(entry.level);
      e += entry.nu * (sp.gap_value(entry.level) - c * c -
                       mean_field_expectation(phi_pot, x));
    }
    e += s * coulomb_energy(q_out);
    const RadialDensity dq = q_out - q;
    const double dd = coulomb_energy(dq);
    st.log.push_back({it, e, dd, fermi_level(spectra, occ)});
    st.iterations = it + 1;
    st.density_change = dd;

    if (it > 5 && e > e_old + 1e-8 * std::abs(e) && !warned_monotone) {
      st.warnings.push_back("energy increased at iteration " + std::to_string(it));
      warned_monotone = true;
    }
    if (it >= 2 && std::abs(e - e_old) < cfg.tol_energy * std::abs(e) &&
        dd < cfg.tol_density) {
      st.converged = true;
      break;
    }
    e_old = e;
    if (it == 0 && !seed) {
      q = q_out;
    } else {
      q = q + cfg.alpha * dq;
    }
  }
  st.occ = occ;
  finalize_state(st, q_out);
  return st;
}

ScfState frozen_state(const ScfConfig& cfg, const OccupationTable& occ) {
  cfg.validate();
  ScfState st;
  st.cfg = cfg;
  st.basis = std::make_shared<const ChannelBasis>(make_scf_grid(cfg), cfg.channel_cutoff());
  const GridPtr grid = st.basis->grid();
  const MeanField bare = mean_field_operator(RadialDensity::zero(grid), cfg, *st.basis);
  st.spectra = diagonalize_channels(bare, cfg.levels_per_channel);
  st.occ = occ;
  st.rho = density_from_occupations(grid, st.spectra, occ);
  st.phi = cfg.fermi_amaldi() * hartree_potential(st.rho);
  st.mu = fermi_level(st.spectra, occ);
  st.energies = energy(st.spectra, occ, cfg, *st.basis);
  return st;
}

}  // namespace nopair
