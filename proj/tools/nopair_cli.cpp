// Command line front end: one subcommand per table the library can produce.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nopair/constants.hpp"
#include "nopair/errors.hpp"
#include "nopair/harness.hpp"
#include "nopair/hydrogenic.hpp"
#include "nopair/mittleman.hpp"
#include "nopair/sere_scf.hpp"
#include "nopair/thomas_fermi.hpp"

namespace fs = std::filesystem;
using namespace nopair;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoConvergence = 2;
constexpr int kExitConfig = 3;

struct Globals {
  std::string config_path;
  std::string out_dir = ".";
  RunConfig cfg;
  std::string hash;

  std::string path(const std::string& name) const { return (fs::path(out_dir) / name).string(); }
};

std::vector<PictureSpec> parse_pictures(const std::vector<std::string>& names) {
  std::vector<PictureSpec> out;
  for (const auto& n : names) out.push_back(PictureSpec::parse(n));
  return out;
}

void write_plot(const std::string& path, const std::string& hash,
                const std::vector<std::pair<double, double>>& points) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "# config_hash=" << hash << '\n';
  for (const auto& [x, y] : points) out << format_number(x) << ' ' << format_number(y) << '\n';
}

int run_constants(const Globals& g, double kappa, int grid_size, const std::string& out) {
  const KappaConstants k = kappa_constants(kappa);
  const ExclusionConstants ex = exclusion_constant_default(kappa);
  std::cout << "kappa " << format_number(k.kappa) << '\n'
            << "C_kappa " << format_number(k.c_lower) << '\n'
            << "upper " << format_number(k.upper) << '\n'
            << "C_HLS " << format_number(ex.c_hls) << '\n'
            << "C_D " << format_number(ex.c_d) << '\n'
            << "C_ex " << format_number(ex.c_ex) << (ex.approximate_inputs ? " (defaulted inputs)" : "")
            << '\n';
  if (grid_size < 2) throw ConfigError("--grid must be at least 2");
  std::vector<double> kg(grid_size), kpg(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    // Open interval (0, 1) for kappa and (-1, 1) for kappa'.
    kg[i] = (i + 0.5) / grid_size;
    kpg[i] = -1.0 + 2.0 * (i + 0.5) / grid_size;
  }
  const AdmissibleRegion region = admissible_region(kg, kpg);
  CsvTable t;
  t.hash = g.hash;
  t.columns = {"kappa", "kappa_prime", "admissible"};
  for (int i = 0; i < grid_size; ++i) {
    for (int j = 0; j < grid_size; ++j) {
      t.add_row({format_number(kg[i]), format_number(kpg[j]), region.cell[i][j] ? "1" : "0"});
    }
  }
  t.save(g.path(out));
  write_plot(g.path("admissible_boundary.dat"), g.hash, region.boundary);
  return kExitOk;
}

int run_scott(const Globals& g, double kappa, int n_max, const std::string& picture) {
  if (picture != "furry" && picture != "br" && picture != "both") {
    throw ConfigError("--picture must be furry, br or both");
  }
  CsvTable t;
  t.hash = g.hash;
  t.columns = {"picture", "kappa", "estimate", "tail_error"};
  const ScottEstimate f = scott_furry(kappa, n_max);
  if (picture != "br") {
    t.add_row({"furry", format_number(kappa), format_number(f.estimate), format_number(f.tail_error)});
  }
  if (picture != "furry") {
    const int n = std::max(g.cfg.grid.n, 1500);
    const double r_min = g.cfg.grid.r_min > 0 ? g.cfg.grid.r_min : 2e-6;
    const double r_max = g.cfg.grid.r_max > 0 ? g.cfg.grid.r_max : 1000.0;
    const ScottBrEstimate br = scott_br(kappa, make_log_grid(r_min, r_max, n), n_max);
    t.add_row({"br", format_number(kappa), format_number(br.estimate), format_number(br.tail_error)});
  }
  t.write(std::cout);
  t.save(g.path("scott.csv"));
  return kExitOk;
}

int run_scf(const Globals& g, double z, double n, double kappa, double alpha, double tol, int kmax,
            const std::string& prefix) {
  RunConfig rc = g.cfg;
  rc.kappa = kappa;
  if (alpha > 0) rc.alpha = alpha;
  if (tol > 0) rc.tol_energy = rc.tol_density = tol;
  if (kmax > 0) rc.kmax = kmax;
  ScfConfig cfg = rc.scf(z, n);
  cfg.validate();
  const ScfState s = scf_solve(cfg);
  const EulerResidual eu = euler_check(s);

  nlohmann::json j;
  j["config_hash"] = config_hash(rc);
  j["Z"] = z;
  j["N"] = cfg.electrons();
  j["kappa"] = kappa;
  j["c"] = cfg.c();
  j["converged"] = s.converged;
  j["iterations"] = s.iterations;
  j["energies"] = {{"E_S", s.energies.e_ha},
                   {"E_H", s.energies.e_h},
                   {"kinetic_coulomb", s.energies.kinetic_coulomb},
                   {"hartree", s.energies.hartree}};
  j["fermi_level"] = s.mu;
  j["residuals"] = {{"density_change", s.density_change},
                    {"retraction_defect", eu.retraction_defect},
                    {"xc_norm", eu.xc_norm},
                    {"aufbau_violations", eu.aufbau_violations},
                    {"trace_defect", eu.trace_defect}};
  nlohmann::json occ = nlohmann::json::array();
  for (const auto& e : s.occ.entries) {
    occ.push_back({{"kappa_j", e.kappa_j},
                   {"level", e.level},
                   {"nu", e.nu},
                   {"lambda", s.spectra.at(e.kappa_j).gap_value(e.level)}});
  }
  j["occupations"] = occ;
  j["warnings"] = s.warnings;
  {
    std::ofstream out(g.path(prefix + "_state.json"));
    if (!out) throw ConfigError("cannot write state file");
    out << j.dump(2) << '\n';
  }
  CsvTable t;
  t.hash = config_hash(rc);
  t.columns = {"r", "rho", "q", "phi"};
  const Vec rho = s.rho.rho();
  for (int i = 0; i < s.grid()->n; ++i) {
    t.add_row({format_number(s.grid()->r(i)), format_number(rho(i)), format_number(s.rho.q(i)),
               format_number(s.phi(i))});
  }
  t.save(g.path(prefix + "_density.csv"));

  std::cout << "E_S " << format_number(s.energies.e_ha) << "\niterations " << s.iterations
            << "\nconverged " << (s.converged ? "yes" : "no") << '\n';
  for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
  return s.converged ? kExitOk : kExitNoConvergence;
}

int run_tf(const Globals& g, double z, const std::string& out) {
  const TFSolution& sol = universal_solution();
  std::cout << "slope " << format_number(sol.slope) << "\nC_TF " << format_number(sol.energy_coefficient)
            << "\nE_TF " << format_number(tf_energy(z)) << '\n';
  CsvTable y;
  y.hash = g.hash;
  y.columns = {"x", "y"};
  for (Eigen::Index i = 0; i < sol.x.size(); ++i) y.add_row({format_number(sol.x(i)), format_number(sol.y(i))});
  y.save(g.path(out + "_y.csv"));

  ScfConfig cfg = g.cfg.scf(z);
  const GridPtr grid = make_scf_grid(cfg);
  const RadialDensity d = tf_density(z, grid);
  const Vec rho = d.rho();
  CsvTable t;
  t.hash = g.hash;
  t.columns = {"r", "rho", "q"};
  for (int i = 0; i < grid->n; ++i) {
    t.add_row({format_number(grid->r(i)), format_number(rho(i)), format_number(d.q(i))});
  }
  t.save(g.path(out + "_density.csv"));
  return kExitOk;
}

int run_mittleman(const Globals& g, double z, double kappa, const std::vector<std::string>& pictures,
                  bool norms, const std::string& out) {
  RunConfig rc = g.cfg;
  rc.kappa = kappa;
  const ScfState s = scf_solve(rc.scf(z));
  if (!s.converged) {
    std::cerr << "error: the SCF run did not converge\n";
    return kExitNoConvergence;
  }
  CsvTable t;
  t.hash = config_hash(rc);
  t.columns = {"picture", "E_H_gammaA", "I", "II", "III", "cross_check", "birman_norm", "trace_cond",
               "ii_r", "ii_qq", "identity_residual", "boundedness_slack", "ope_lower", "ope_upper"};
  for (const PictureReport& r : analyze_pictures(s, parse_pictures(pictures), norms)) {
    const auto& d = r.dec;
    const auto& a = r.adm;
    t.add_row({r.spec.name(), format_number(d.e_h_gamma_a), format_number(d.term_i),
               format_number(d.term_ii), format_number(d.term_iii), format_number(d.cross_check),
               format_number(a.birman_norm), format_number(a.trace_condition), format_number(d.ii_r),
               format_number(d.ii_qq), format_number(d.identity_residual),
               format_number(a.boundedness_slack), format_number(a.ope_lower),
               format_number(a.ope_upper)});
  }
  t.write(std::cout);
  t.save(g.path(out));
  return kExitOk;
}

int run_sweep(const Globals& g, std::vector<double> zs, double kappa, std::vector<std::string> pictures,
              bool free_tf, bool resume) {
  RunConfig rc = g.cfg;
  if (!zs.empty()) rc.sweep_z = zs;
  if (!pictures.empty()) rc.sweep_pictures = pictures;
  if (free_tf) rc.free_tf = true;
  rc.kappa = kappa;
  SweepOptions opt;
  opt.z = rc.sweep_z;
  opt.kappa = kappa;
  opt.pictures = parse_pictures(rc.sweep_pictures);
  opt.operator_norms = rc.operator_norms;
  const std::string table_path = g.path("sweep.csv");
  if (resume) opt.persist_path = g.path("sweep.partial.csv");
  const std::vector<SweepRow> rows = sweep(opt, rc);
  const std::string hash = config_hash(rc);
  sweep_table(rows, hash).save(table_path);
  if (resume) fs::remove(opt.persist_path);

  std::vector<std::pair<double, double>> trend;
  bool all_converged = true;
  for (const auto& r : rows) {
    all_converged = all_converged && r.converged;
    trend.push_back({std::pow(r.z, -1.0 / 3.0), r.residual_z2});
  }
  write_plot(g.path("scott_trend.dat"), hash, trend);

  const double c_tf = universal_solution().energy_coefficient;
  ScottFit fit;
  if (rc.free_tf) {
    std::vector<double> z, e;
    for (const auto& r : rows) {
      if (r.converged) {
        z.push_back(r.z);
        e.push_back(r.e_s);
      }
    }
    fit = fit_scott_free_tf(z, e);
  } else {
    fit = fit_scott(rows, c_tf);
  }
  std::cout << "scott_estimate " << format_number(fit.estimate) << "\nstderr "
            << format_number(fit.stderr_estimate) << "\ntf_coefficient "
            << format_number(fit.tf_coefficient) << "\nscott_furry "
            << format_number(scott_furry(kappa, 400).estimate) << '\n';
  return all_converged ? kExitOk : kExitNoConvergence;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"no-pair relativistic atomic structure laboratory"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "JSON file with grid, scf and sweep sections");
  app.add_option("--out-dir", g.out_dir, "Directory for output files");

  double kappa = NAN;  // falls back to the config value
  auto* constants = app.add_subcommand("constants", "Closed-form constants and the admissible region");
  int region_grid = 200;
  std::string region_out = "admissible_region.csv";
  constants->add_option("--kappa", kappa, "Coupling Z/c");
  constants->add_option("--grid", region_grid, "Cells per axis of the region grid");
  constants->add_option("--out", region_out, "Region CSV");

  auto* scott = app.add_subcommand("scott", "Scott constants from hydrogenic spectra");
  int n_max = 400;
  std::string picture = "furry";
  scott->add_option("--kappa", kappa, "Coupling Z/c");
  scott->add_option("--nmax", n_max, "Largest principal quantum number summed");
  scott->add_option("--picture", picture, "furry, br or both");

  auto* scf = app.add_subcommand("scf", "Self-consistent no-pair Dirac-Hartree ground state");
  double z = 10.0, n = 0.0, alpha = 0.0, tol = 0.0;
  int kmax = 0;
  std::string prefix = "scf";
  scf->add_option("--Z", z, "Nuclear charge")->required();
  scf->add_option("--N", n, "Electron number (default Z)");
  scf->add_option("--kappa", kappa, "Coupling Z/c");
  scf->add_option("--alpha", alpha, "Density mixing factor");
  scf->add_option("--tol", tol, "Energy and density tolerance");
  scf->add_option("--kmax", kmax, "Largest |kappa_j|");
  scf->add_option("--out-prefix", prefix, "Prefix of the state and density files");

  auto* tf = app.add_subcommand("tf", "Thomas-Fermi universal function and density");
  std::string tf_out = "tf";
  tf->add_option("--Z", z, "Nuclear charge");
  tf->add_option("--out", tf_out, "Prefix of the output files");

  auto* mitt = app.add_subcommand("mittleman", "Projected states and energy decomposition per picture");
  std::vector<std::string> pictures;
  bool norms = false;
  std::string mitt_out = "mittleman.csv";
  mitt->add_option("--Z", z, "Nuclear charge")->required();
  mitt->add_option("--kappa", kappa, "Coupling Z/c");
  mitt->add_option("--pictures", pictures, "furry, free, coulomb:<k'>, meanfield[:<s>]")->delimiter(',');
  mitt->add_flag("--operator-norms", norms, "Also compute the dense Birman and sandwich norms");
  mitt->add_option("--out", mitt_out, "Output CSV");

  auto* sw = app.add_subcommand("sweep", "Z sweep with asymptotic diagnostics and Scott fit");
  std::vector<double> zs;
  bool free_tf = false, resume = false;
  sw->add_option("--z", zs, "Nuclear charges")->delimiter(',');
  sw->add_option("--kappa", kappa, "Coupling Z/c");
  sw->add_option("--pictures", pictures, "Pictures per row")->delimiter(',');
  sw->add_flag("--free-tf", free_tf, "Fit the Thomas-Fermi coefficient as well");
  sw->add_flag("--resume", resume, "Persist rows and reuse them after an interruption");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (!g.config_path.empty()) g.cfg = load_config(g.config_path);
    g.hash = config_hash(g.cfg);
    if (std::isnan(kappa)) kappa = g.cfg.kappa;
    fs::create_directories(g.out_dir);
    if (mitt->parsed() && pictures.empty()) {
      std::ostringstream half;
      half << "coulomb:" << format_number(kappa / 2);
      pictures = {"coulomb:-0.5", "coulomb:0", half.str(), "coulomb:" + format_number(kappa)};
    }
    if (*constants) return run_constants(g, kappa, region_grid, region_out);
    if (*scott) return run_scott(g, kappa, n_max, picture);
    if (*scf) return run_scf(g, z, n, kappa, alpha, tol, kmax, prefix);
    if (*tf) return run_tf(g, z, tf_out);
    if (*mitt) return run_mittleman(g, z, kappa, pictures, norms, mitt_out);
    if (*sw) return run_sweep(g, zs, kappa, pictures, free_tf, resume);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
