#pragma once

#include <string>
#include <vector>

#include "nopair/dirac_channel.hpp"
#include "nopair/sere_scf.hpp"

namespace nopair {

enum class PictureKind { Furry, Free, CoulombPrime, MeanField, Custom };

// A spherically symmetric perturbation A added to D_{c,Z}; the picture's
// projector is the positive spectral projector of D_{c,Z} + A.
struct PictureSpec {
  PictureKind kind = PictureKind::Furry;
  double kappa_prime = 0.0;  // CoulombPrime: D_{c,Z} + A has coupling kappa'
  double scale = 1.0;        // MeanField: A = scale * phi_*
  Vec samples;               // Custom: A at the nodes

  static PictureSpec furry();
  static PictureSpec free();
  static PictureSpec coulomb_prime(double kappa_prime);
  static PictureSpec mean_field(double scale = 1.0);
  static PictureSpec custom(const Vec& samples);
  // "furry", "free", "coulomb:<kappa'>", "meanfield[:<scale>]"
  static PictureSpec parse(const std::string& text);
  std::string name() const;
};

// A sampled on nodes and half nodes of the state's grid.
RadialPotential picture_potential(const PictureSpec& spec, const ScfState& state);

// D_{c,Z} + A for every channel of the state's basis.
std::vector<ChannelOperator> picture_operator(const PictureSpec& spec, const ScfState& state);

// Off-diagonal first-order change of the positive projector of
// diag(lambda) under the symmetric perturbation a:
// Q_ij = a_ij / |lambda_i - lambda_j| when the signs differ, else 0.
Mat first_order_response(const Vec& lambda, const Mat& a);

struct ProjectedState {
  GeneralState gamma_a;
  double trace = 0.0;
  double kinetic_coulomb = 0.0;  // tr[(D_{c,Z} - c^2) gamma_A]
  double hartree = 0.0;          // D[rho_{gamma_A}]
  double e_h = 0.0;
};

ProjectedState project_state(const ScfState& state, const PictureSpec& spec);

struct Decomposition {
  double e_h_star = 0.0;     // E^H(gamma_*)
  double e_h_gamma_a = 0.0;  // E^H(gamma_A)
  double term_i = 0.0;
  double term_ii = 0.0;
  double ii_r = 0.0;   // tr[(D_* - c^2) 2 Re(R gamma_*)]
  double ii_qq = 0.0;  // tr[(D_* - c^2) Q gamma_* Q]
  double term_iii = 0.0;
  double cross_check = 0.0;      // |tr[(D_* - c^2)(Q' gamma_* + gamma_* Q')]|
  double fermi_amaldi_term = 0.0;  // (1/N) tr[phi_{rho_*} (gamma_A - gamma_*)]
  // |E^H(gamma_A) - (I + II + III + fermi_amaldi_term)|
  double identity_residual = 0.0;
  // max over channels of ||Q - (Q' + R)||_F on the occupied columns
  double bookkeeping = 0.0;
};

Decomposition decompose(const ScfState& state, const PictureSpec& spec);

struct Admissibility {
  double birman_norm = 0.0;   // || |D_0|^{-1/2} A |D_0|^{-1/2} ||
  double ope_lower = 0.0;     // spectral range of |D_0|^{-1/2} |D + A| |D_0|^{-1/2}
  double ope_upper = 0.0;
  double boundedness_slack = 0.0;  // c^2 - max spec(P_A^perp D_{c,Z} P_A^perp) on ran P_A^perp
  double trace_condition = 0.0;    // tr(A gamma_* A |D_0|^{-1})
  bool operator_norms = false;     // whether birman/ope were computed
};

Admissibility admissibility_diagnostics(const PictureSpec& spec, const ScfState& state,
                                        bool operator_norms = true);

// tr(A gamma_* A |D_0|^{-1}) from the occupied orbitals alone.
double trace_condition(const PictureSpec& spec, const ScfState& state);

// c^2 minus the top of P_*^perp D_{c,Z} P_*^perp over all channels, where
// P_* is the positive projector of the converged mean-field operator.
double no_pair_boundedness(const ScfState& state);

struct PictureReport {
  PictureSpec spec;
  Decomposition dec;
  Admissibility adm;
};

PictureReport analyze_picture(const ScfState& state, const PictureSpec& spec,
                              bool operator_norms = true);

// Same as analyze_picture for several pictures, sharing the spectra of D_*.
std::vector<PictureReport> analyze_pictures(const ScfState& state,
                                            const std::vector<PictureSpec>& specs,
                                            bool operator_norms = true);

}  // namespace nopair
