#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nopair/mittleman.hpp"
#include "nopair/sere_scf.hpp"

namespace nopair {

// Everything a run depends on besides the command line. Read from a JSON
// document with optional sections "grid", "scf" and "sweep"; unknown keys
// are rejected.
struct RunConfig {
  GridSettings grid;

  double kappa = 0.5;
  int kmax = 0;
  double alpha = 0.3;
  double tol_energy = 1e-10;
  double tol_density = 1e-10;
  int max_iter = 300;
  OccupationMode occupations = OccupationMode::Relaxed;
  int levels_per_channel = 12;
  double fermi_window = 0.5;

  std::vector<double> sweep_z = {20, 30, 40, 55, 70, 90};
  std::vector<std::string> sweep_pictures = {"coulomb:0", "coulomb:0.25"};
  bool operator_norms = false;
  bool free_tf = false;

  ScfConfig scf(double z, double n_electrons = 0.0) const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
// Canonical JSON of the resolved configuration (sorted keys, no spaces).
std::string config_json(const RunConfig& cfg);
// 16 hex digits of the FNV-1a hash of config_json.
std::string config_hash(const RunConfig& cfg);

// Fixed-format number used in every table: %.12g, "nan" and "inf" spelled
// out.
std::string format_number(double v);

// A CSV table whose first line is "# config_hash=<hash>".
struct CsvTable {
  std::string hash;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  void write(std::ostream& out) const;
  void save(const std::string& path) const;
  static CsvTable read(std::istream& in);
  static CsvTable load(const std::string& path);
};

struct PictureRow {
  std::string picture;
  double e_h_gamma_a = 0.0;
  double term_i = 0.0;
  double term_ii = 0.0;
  double term_iii = 0.0;
  double cross_check = 0.0;
  double birman_norm = 0.0;
  double trace_condition = 0.0;
  double boundedness_slack = 0.0;
};

struct SweepRow {
  double z = 0.0;
  double n = 0.0;
  double kappa = 0.0;
  bool converged = false;
  int iterations = 0;
  double e_s = 0.0;
  double e_tf = 0.0;
  double residual = 0.0;          // E^S - C^TF Z^{7/3}
  double residual_z2 = 0.0;       // residual / Z^2
  double inverse_r_norm = 0.0;    // Z tr[|x|^{-1} gamma_*] / Z^{7/3}
  double hartree_norm = 0.0;      // D[rho_*] / Z^{7/3}
  double momentum_norm = 0.0;     // tr[|p| gamma_*] / Z^{5/3}
  double phi_norm = 0.0;          // sup phi_* / Z^{4/3}
  double tf_distance_norm = 0.0;  // D[rho_* - rho^TF] / Z^2
  double mf_trace_norm = 0.0;     // tr(phi_* gamma_* phi_* |D_0|^{-1}) / Z^{12/5}
  double no_pair_slack = 0.0;
  std::vector<PictureRow> pictures;
};

// The sweep columns of one converged (or flagged) state.
SweepRow sweep_row(const ScfState& state, const std::vector<PictureSpec>& pictures,
                   bool operator_norms);

struct SweepOptions {
  std::vector<double> z;
  double kappa = 0.5;
  std::vector<PictureSpec> pictures;
  bool operator_norms = false;
  // When set, the table is rewritten after every row and rows already present
  // (with a matching config hash) are reused on the next call.
  std::string persist_path;
};

// One neutral atom per Z. Non-converged rows are flagged, not dropped.
std::vector<SweepRow> sweep(const SweepOptions& opt, const RunConfig& cfg);

CsvTable sweep_table(const std::vector<SweepRow>& rows, const std::string& hash);
std::vector<SweepRow> sweep_rows(const CsvTable& table);

struct ScottFit {
  double estimate = 0.0;  // intercept
  double stderr_estimate = 0.0;
  double slope = 0.0;     // coefficient of Z^{-1/3}
  double tf_coefficient = 0.0;
  bool free_tf = false;   // tf_coefficient was fitted as well
  int rows = 0;
};

// Least squares of (E - c_tf Z^{7/3}) / Z^2 against Z^{-1/3}.
ScottFit fit_scott(const std::vector<double>& z, const std::vector<double>& e,
                   double tf_coefficient);
// Fits E / Z^2 = c Z^{1/3} + s + d Z^{-1/3} with c free.
ScottFit fit_scott_free_tf(const std::vector<double>& z, const std::vector<double>& e);
// Uses converged rows only.
ScottFit fit_scott(const std::vector<SweepRow>& rows, double tf_coefficient);

}  // namespace nopair
