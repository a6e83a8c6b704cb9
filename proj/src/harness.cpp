#include "nopair/harness.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nopair/errors.hpp"
#include "nopair/meanfield.hpp"
#include "nopair/thomas_fermi.hpp"

namespace nopair {

using nlohmann::json;

namespace {

void reject_unknown(const json& section, const std::string& name,
                    const std::set<std::string>& allowed) {
  if (!section.is_object()) throw ConfigError("config: '" + name + "' must be an object");
  for (const auto& [key, value] : section.items()) {
    (void)value;
    if (!allowed.count(key)) throw ConfigError("config: unknown key '" + name + "." + key + "'");
  }
}

template <typename T>
void read(const json& section, const std::string& name, const char* key, T& out) {
  if (!section.contains(key)) return;
  try {
    out = section.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: '" + name + "." + key + "' has the wrong type");
  }
}

void validate(const RunConfig& c) {
  if (c.grid.n < 50) throw ConfigError("config: grid.n must be at least 50");
  if (c.grid.r_min < 0.0 || c.grid.r_max < 0.0) throw ConfigError("config: negative grid bound");
  if (c.grid.r_min > 0.0 && c.grid.r_max > 0.0 && c.grid.r_max <= c.grid.r_min) {
    throw ConfigError("config: grid.r_max must exceed grid.r_min");
  }
  if (!(c.kappa > 0.0 && c.kappa < 1.0)) throw ConfigError("config: kappa must lie in (0, 1)");
  for (double z : c.sweep_z) {
    if (!(z > 0.0)) throw ConfigError("config: sweep.z entries must be positive");
  }
  for (const auto& p : c.sweep_pictures) PictureSpec::parse(p);
  // The remaining fields are checked by ScfConfig::validate.
  c.scf(c.sweep_z.empty() ? 2.0 : c.sweep_z.front()).validate();
}

json to_json(const RunConfig& c) {
  json j;
  j["grid"] = {{"n", c.grid.n}, {"r_min", c.grid.r_min}, {"r_max", c.grid.r_max}};
  j["scf"] = {{"kappa", c.kappa},
              {"kmax", c.kmax},
              {"alpha", c.alpha},
              {"tol_energy", c.tol_energy},
              {"tol_density", c.tol_density},
              {"max_iter", c.max_iter},
              {"occupations", c.occupations == OccupationMode::Relaxed ? "relaxed" : "aufbau"},
              {"levels_per_channel", c.levels_per_channel},
              {"fermi_window", c.fermi_window}};
  j["sweep"] = {{"z", c.sweep_z},
                {"pictures", c.sweep_pictures},
                {"operator_norms", c.operator_norms},
                {"free_tf", c.free_tf}};
  return j;
}

std::string column_value(bool b) { return b ? "1" : "0"; }

double parse_double(const std::string& s) {
  if (s == "nan") return NAN;
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw ConfigError("table: cannot parse number '" + s + "'");
  }
}

void save_atomic(const CsvTable& table, const std::string& path) {
  const std::string tmp = path + ".tmp";
  table.save(tmp);
  std::filesystem::rename(tmp, path);
}

const std::vector<std::string> kRowColumns = {
    "Z", "N", "kappa", "converged", "iterations", "E_S", "E_TF", "residual", "residual_over_Z2",
    "inv_r_norm", "hartree_norm", "momentum_norm", "phi_norm", "tf_distance_norm",
    "mf_trace_norm", "no_pair_slack"};
const std::vector<std::string> kPictureColumns = {
    "E_H_gammaA", "I", "II", "III", "cross_check", "birman_norm", "trace_cond", "boundedness_slack"};

}  // namespace

ScfConfig RunConfig::scf(double z, double n_electrons) const {
  ScfConfig c;
  c.z = z;
  c.n_electrons = n_electrons;
  c.kappa = kappa;
  c.kmax = kmax;
  c.grid = grid;
  c.alpha = alpha;
  c.tol_energy = tol_energy;
  c.tol_density = tol_density;
  c.max_iter = max_iter;
  c.occupations = occupations;
  c.levels_per_channel = levels_per_channel;
  c.fermi_window = fermi_window;
  return c;
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  RunConfig c;
  reject_unknown(j, "config", {"grid", "scf", "sweep"});
  if (j.contains("grid")) {
    const json& g = j["grid"];
    reject_unknown(g, "grid", {"n", "r_min", "r_max"});
    read(g, "grid", "n", c.grid.n);
    read(g, "grid", "r_min", c.grid.r_min);
    read(g, "grid", "r_max", c.grid.r_max);
  }
  if (j.contains("scf")) {
    const json& s = j["scf"];
    reject_unknown(s, "scf",
                   {"kappa", "kmax", "alpha", "tol_energy", "tol_density", "max_iter",
                    "occupations", "levels_per_channel", "fermi_window"});
    read(s, "scf", "kappa", c.kappa);
    read(s, "scf", "kmax", c.kmax);
    read(s, "scf", "alpha", c.alpha);
    read(s, "scf", "tol_energy", c.tol_energy);
    read(s, "scf", "tol_density", c.tol_density);
    read(s, "scf", "max_iter", c.max_iter);
    read(s, "scf", "levels_per_channel", c.levels_per_channel);
    read(s, "scf", "fermi_window", c.fermi_window);
    std::string mode = "relaxed";
    read(s, "scf", "occupations", mode);
    if (mode == "relaxed") {
      c.occupations = OccupationMode::Relaxed;
    } else if (mode == "aufbau") {
      c.occupations = OccupationMode::Aufbau;
    } else {
      throw ConfigError("config: scf.occupations must be 'relaxed' or 'aufbau'");
    }
  }
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    reject_unknown(s, "sweep", {"z", "pictures", "operator_norms", "free_tf"});
    read(s, "sweep", "z", c.sweep_z);
    read(s, "sweep", "pictures", c.sweep_pictures);
    read(s, "sweep", "operator_norms", c.operator_norms);
    read(s, "sweep", "free_tf", c.free_tf);
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_json(const RunConfig& cfg) { return to_json(cfg).dump(); }

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : config_json(cfg)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw DomainError("CsvTable: row width mismatch");
  rows.push_back(std::move(row));
}

void CsvTable::write(std::ostream& out) const {
  out << "# config_hash=" << hash << '\n';
  for (size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

void CsvTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write(out);
}

CsvTable CsvTable::read(std::istream& in) {
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  if (!std::getline(in, line) || line.rfind("# config_hash=", 0) != 0) {
    throw ConfigError("table: missing config hash line");
  }
  t.hash = line.substr(14);
  if (!std::getline(in, line)) throw ConfigError("table: missing column header");
  t.columns = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.add_row(split(line));
  }
  return t;
}

CsvTable CsvTable::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  return read(in);
}

SweepRow sweep_row(const ScfState& state, const std::vector<PictureSpec>& pictures,
                   bool operator_norms) {
  SweepRow row;
  const double z = state.cfg.z;
  row.z = z;
  row.n = state.cfg.electrons();
  row.kappa = state.cfg.kappa;
  row.converged = state.converged;
  row.iterations = state.iterations;
  row.e_s = state.energies.e_ha;
  row.e_tf = tf_energy(z);
  row.residual = row.e_s - row.e_tf;
  row.residual_z2 = row.residual / (z * z);

  const TraceDiagnostics tr =
      trace_diagnostics(state.grid(), state.spectra, state.occ, z, state.c());
  const double z73 = std::pow(z, 7.0 / 3.0);
  row.inverse_r_norm = z * tr.inverse_r / z73;
  row.hartree_norm = state.energies.hartree / z73;
  row.momentum_norm = tr.abs_momentum / std::pow(z, 5.0 / 3.0);
  row.phi_norm = state.phi.cwiseAbs().maxCoeff() / std::pow(z, 4.0 / 3.0);
  row.tf_distance_norm = coulomb_distance(state.rho, z) / (z * z);
  row.mf_trace_norm = trace_condition(PictureSpec::mean_field(), state) / std::pow(z, 2.4);
  row.no_pair_slack = no_pair_boundedness(state);

  for (const PictureReport& r : analyze_pictures(state, pictures, operator_norms)) {
    PictureRow p;
    p.picture = r.spec.name();
    p.e_h_gamma_a = r.dec.e_h_gamma_a;
    p.term_i = r.dec.term_i;
    p.term_ii = r.dec.term_ii;
    p.term_iii = r.dec.term_iii;
    p.cross_check = r.dec.cross_check;
    p.birman_norm = r.adm.birman_norm;
    p.trace_condition = r.adm.trace_condition;
    p.boundedness_slack = r.adm.boundedness_slack;
    row.pictures.push_back(std::move(p));
  }
  return row;
}

CsvTable sweep_table(const std::vector<SweepRow>& rows, const std::string& hash) {
  CsvTable t;
  t.hash = hash;
  t.columns = kRowColumns;
  if (!rows.empty()) {
    for (const auto& p : rows.front().pictures) {
      for (const auto& col : kPictureColumns) t.columns.push_back(p.picture + "/" + col);
    }
  }
  for (const SweepRow& r : rows) {
    std::vector<std::string> cells = {
        format_number(r.z),           format_number(r.n),
        format_number(r.kappa),       column_value(r.converged),
        std::to_string(r.iterations), format_number(r.e_s),
        format_number(r.e_tf),        format_number(r.residual),
        format_number(r.residual_z2), format_number(r.inverse_r_norm),
        format_number(r.hartree_norm), format_number(r.momentum_norm),
        format_number(r.phi_norm),    format_number(r.tf_distance_norm),
        format_number(r.mf_trace_norm), format_number(r.no_pair_slack)};
    for (const PictureRow& p : r.pictures) {
      for (double v : {p.e_h_gamma_a, p.term_i, p.term_ii, p.term_iii, p.cross_check,
                       p.birman_norm, p.trace_condition, p.boundedness_slack}) {
        cells.push_back(format_number(v));
      }
    }
    t.add_row(std::move(cells));
  }
  return t;
}

std::vector<SweepRow> sweep_rows(const CsvTable& table) {
  const size_t fixed = kRowColumns.size();
  const size_t width = kPictureColumns.size();
  if (table.columns.size() < fixed || (table.columns.size() - fixed) % width != 0) {
    throw ConfigError("table: not a sweep table");
  }
  for (size_t i = 0; i < fixed; ++i) {
    if (table.columns[i] != kRowColumns[i]) throw ConfigError("table: not a sweep table");
  }
  std::vector<std::string> names;
  for (size_t i = fixed; i < table.columns.size(); i += width) {
    names.push_back(table.columns[i].substr(0, table.columns[i].rfind('/')));
  }
  std::vector<SweepRow> out;
  for (const auto& cells : table.rows) {
    std::vector<double> v;
    for (const auto& c : cells) v.push_back(parse_double(c));
    SweepRow r;
    r.z = v[0];
    r.n = v[1];
    r.kappa = v[2];
    r.converged = v[3] != 0.0;
    r.iterations = static_cast<int>(v[4]);
    r.e_s = v[5];
    r.e_tf = v[6];
    r.residual = v[7];
    r.residual_z2 = v[8];
    r.inverse_r_norm = v[9];
    r.hartree_norm = v[10];
    r.momentum_norm = v[11];
    r.phi_norm = v[12];
    r.tf_distance_norm = v[13];
    r.mf_trace_norm = v[14];
    r.no_pair_slack = v[15];
    for (size_t k = 0; k < names.size(); ++k) {
      const double* p = &v[fixed + k * width];
      r.pictures.push_back({names[k], p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7]});
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SweepRow> sweep(const SweepOptions& opt, const RunConfig& cfg) {
  const std::string hash = config_hash(cfg);
  std::map<double, SweepRow> done;
  if (!opt.persist_path.empty() && std::filesystem::exists(opt.persist_path)) {
    const CsvTable old = CsvTable::load(opt.persist_path);
    if (old.hash == hash) {
      for (SweepRow& r : sweep_rows(old)) done[r.z] = std::move(r);
    }
  }
  RunConfig run = cfg;
  run.kappa = opt.kappa;
  std::vector<SweepRow> rows;
  for (double z : opt.z) {
    auto it = done.find(z);
    if (it != done.end()) {
      rows.push_back(it->second);
      continue;
    }
    const ScfState state = scf_solve(run.scf(z));
    rows.push_back(sweep_row(state, opt.pictures, opt.operator_norms));
    if (!opt.persist_path.empty()) save_atomic(sweep_table(rows, hash), opt.persist_path);
  }
  return rows;
}

namespace {

ScottFit least_squares(const Mat& x, const Vec& y, int intercept_col) {
  const Eigen::Index m = x.rows();
  const Eigen::Index p = x.cols();
  if (m < 4) throw DomainError("fit_scott: need at least 4 rows");
  const Mat xtx = x.transpose() * x;
  Eigen::JacobiSVD<Mat> svd_x(x);
  const Vec s = svd_x.singularValues();
  if (s(p - 1) <= 1e-12 * s(0)) throw DomainError("fit_scott: singular design matrix");
  const Vec beta = xtx.ldlt().solve(x.transpose() * y);
  const Vec res = y - x * beta;
  const double dof = static_cast<double>(m - p);
  const double sigma2 = dof > 0 ? res.squaredNorm() / dof : 0.0;
  const Mat cov = sigma2 * xtx.inverse();
  ScottFit f;
  f.estimate = beta(intercept_col);
  f.stderr_estimate = std::sqrt(std::max(0.0, cov(intercept_col, intercept_col)));
  f.slope = beta(p - 1);
  f.rows = static_cast<int>(m);
  return f;
}

}  // namespace

ScottFit fit_scott(const std::vector<double>& z, const std::vector<double>& e,
                   double tf_coefficient) {
  if (z.size() != e.size()) throw DomainError("fit_scott: size mismatch");
  const Eigen::Index m = static_cast<Eigen::Index>(z.size());
  Mat x(m, 2);
  Vec y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = std::pow(z[i], -1.0 / 3.0);
    y(i) = (e[i] - tf_coefficient * std::pow(z[i], 7.0 / 3.0)) / (z[i] * z[i]);
  }
  ScottFit f = least_squares(x, y, 0);
  f.tf_coefficient = tf_coefficient;
  return f;
}

ScottFit fit_scott_free_tf(const std::vector<double>& z, const std::vector<double>& e) {
  if (z.size() != e.size()) throw DomainError("fit_scott: size mismatch");
  const Eigen::Index m = static_cast<Eigen::Index>(z.size());
  Mat x(m, 3);
  Vec y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    x(i, 0) = std::pow(z[i], 1.0 / 3.0);
    x(i, 1) = 1.0;
    x(i, 2) = std::pow(z[i], -1.0 / 3.0);
    y(i) = e[i] / (z[i] * z[i]);
  }
  ScottFit f = least_squares(x, y, 1);
  const Vec beta = (x.transpose() * x).ldlt().solve(x.transpose() * y);
  f.tf_coefficient = beta(0);
  f.free_tf = true;
  return f;
}

ScottFit fit_scott(const std::vector<SweepRow>& rows, double tf_coefficient) {
  std::vector<double> z, e;
  for (const auto& r : rows) {
    if (!r.converged) continue;
    z.push_back(r.z);
    e.push_back(r.e_s);
  }
  return fit_scott(z, e, tf_coefficient);
}

}  // namespace nopair
