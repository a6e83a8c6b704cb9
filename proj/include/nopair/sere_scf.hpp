#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nopair/dirac_channel.hpp"
#include "nopair/grid.hpp"
#include "nopair/meanfield.hpp"

namespace nopair {

struct GridSettings {
  int n = 500;
  double r_min = 0.0;  // 0 selects 1e-5 / Z
  double r_max = 0.0;  // 0 selects max(60 / Z, 40)
};

enum class OccupationMode {
  Aufbau,   // strict aufbau with equal splitting over degenerate levels
  Relaxed,  // occupations near the Fermi level minimize the quadratic model
};

struct ScfConfig {
  double z = 2.0;
  double n_electrons = 0.0;  // 0 selects N = Z
  double kappa = 0.5;
  int kmax = 0;  // 0 selects a cutoff from N
  GridSettings grid;
  double alpha = 0.3;
  double tol_energy = 1e-10;
  double tol_density = 1e-10;
  int max_iter = 300;
  OccupationMode occupations = OccupationMode::Relaxed;
  int levels_per_channel = 12;
  double fermi_window = 0.5;      // Hartree
  double degeneracy_tol = 1e-9;   // in units of c^2
  double aufbau_tol = 1e-7;       // in units of c^2, for the Euler check

  double c() const { return z / kappa; }
  double electrons() const { return n_electrons > 0.0 ? n_electrons : z; }
  // 1 - 1/N
  double fermi_amaldi() const { return 1.0 - 1.0 / electrons(); }
  int channel_cutoff() const;
  void validate() const;
};

int default_kmax(double n_electrons);
GridPtr make_scf_grid(const ScfConfig& cfg);

// Channels kappa_j = -kmax..-1, 1..kmax with shared kinetic blocks.
class ChannelBasis {
 public:
  ChannelBasis(GridPtr grid, int kmax);
  const GridPtr& grid() const { return grid_; }
  int kmax() const { return kmax_; }
  const std::vector<int>& kappas() const { return kappas_; }
  std::shared_ptr<const Mat> block(int kappa_j) const;
  const FreeChannel& free(int kappa_j, double c) const;

 private:
  GridPtr grid_;
  int kmax_;
  std::vector<int> kappas_;
  std::map<int, std::shared_ptr<const Mat>> blocks_;
  mutable std::map<int, std::unique_ptr<FreeChannel>> free_;
  mutable double free_c_ = 0.0;
};

struct MeanField {
  Vec phi;  // (1 - 1/N) times the Hartree potential of the density
  RadialPotential total;  // -Z/r + phi
  std::vector<ChannelOperator> channels;
  std::vector<int> excluded;  // supercritical channels left out
};

MeanField mean_field_operator(const RadialDensity& rho, const ScfConfig& cfg,
                              const ChannelBasis& basis);

SpectrumSet diagonalize_channels(const MeanField& mf, int max_levels);

// Aufbau filling across channels with the remainder split equally per
// state over levels degenerate with the Fermi level.
OccupationTable aufbau(const SpectrumSet& spectra, double n_electrons,
                       double degeneracy_tol = 1e-9);

// Largest occupied level (Hartree, including the rest energy).
double fermi_level(const SpectrumSet& spectra, const OccupationTable& occ);

struct EnergyRecord {
  double kinetic_coulomb = 0.0;  // tr[(D_{c,Z} - c^2) gamma]
  double hartree = 0.0;          // D[rho_gamma]
  double e_ha = 0.0;             // kinetic_coulomb + (1 - 1/N) D
  double e_h = 0.0;              // kinetic_coulomb + D
};

EnergyRecord energy(const SpectrumSet& spectra, const OccupationTable& occ,
                    const ScfConfig& cfg, const ChannelBasis& basis);

struct IterationRecord {
  int iteration = 0;
  double energy = 0.0;
  double density_change = 0.0;
  double fermi = 0.0;
};

struct ScfState {
  ScfConfig cfg;
  std::shared_ptr<const ChannelBasis> basis;
  RadialDensity rho;
  Vec phi;
  SpectrumSet spectra;
  OccupationTable occ;
  double mu = 0.0;
  EnergyRecord energies;
  double density_change = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<IterationRecord> log;
  std::vector<std::string> warnings;

  double c() const { return cfg.c(); }
  const GridPtr& grid() const { return basis->grid(); }
};

// Damped fixed-point iteration for the projected Dirac-Hartree problem.
// The returned state has converged == false when max_iter was reached.
ScfState scf_solve(const ScfConfig& cfg, const RadialDensity* seed = nullptr);

// Rebuilds the state around a given occupation table of the bare
// operator's orbitals (no self-consistency).
ScfState frozen_state(const ScfConfig& cfg, const OccupationTable& occ);

// Density matrix of one channel per magnetic substate,
// gamma = V diag(w) V^T, with V in block order.
struct ChannelMatrix {
  int kappa_j = -1;
  Mat v;
  Vec w;
};

struct GeneralState {
  std::shared_ptr<const ChannelBasis> basis;
  double z = 0.0;
  double c = 1.0;
  double n_electrons = 1.0;
  std::vector<ChannelMatrix> channels;

  RadialDensity density() const;
  double trace() const;
};

GeneralState general_state(const ScfState& s);
GeneralState general_state(const SpectrumSet& spectra, const OccupationTable& occ,
                           const ScfConfig& cfg,
                           std::shared_ptr<const ChannelBasis> basis);

// tr[|D_0|^{1/2} |gamma| |D_0|^{1/2}] summed over channels and substates.
double xc_norm(const GeneralState& g);
double xc_distance(const GeneralState& a, const GeneralState& b);

struct RetractionResult {
  GeneralState state;
  double defect = 0.0;  // X_c distance between input and output
};

// gamma -> P gamma P with P the positive spectral projector of the
// mean-field operator built from gamma's own density.
RetractionResult retraction_step(const GeneralState& g);

struct ThetaResult {
  GeneralState state;
  std::vector<double> defects;
  std::vector<double> ratios;
  double contraction = 0.0;  // largest observed ratio
  double tail_bound = 0.0;   // defect L / (1 - L) at the last step
  int iterations = 0;
};

ThetaResult theta(const GeneralState& g, double tol, int max_n);

struct EulerResidual {
  double retraction_defect = 0.0;
  double xc_norm = 0.0;
  int aufbau_violations = 0;
  double mu = 0.0;
  double mu_lower = 0.0;
  double mu_upper = 0.0;
  bool mu_in_band = false;
  double trace_defect = 0.0;
};

EulerResidual euler_check(const ScfState& s);

}  // namespace nopair
