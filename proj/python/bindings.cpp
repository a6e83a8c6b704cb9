#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nopair/constants.hpp"
#include "nopair/errors.hpp"
#include "nopair/harness.hpp"
#include "nopair/hydrogenic.hpp"
#include "nopair/mittleman.hpp"
#include "nopair/sere_scf.hpp"
#include "nopair/thomas_fermi.hpp"

namespace py = pybind11;
using namespace nopair;

namespace {

ScfConfig make_config(double z, double n, double kappa, int grid_n, double alpha, double tol,
                      int kmax, int max_iter) {
  ScfConfig c;
  c.z = z;
  c.n_electrons = n;
  c.kappa = kappa;
  c.grid.n = grid_n;
  c.alpha = alpha;
  c.tol_energy = c.tol_density = tol;
  c.kmax = kmax;
  c.max_iter = max_iter;
  c.validate();
  return c;
}

py::dict occupations(const ScfState& s) {
  py::list out;
  for (const auto& e : s.occ.entries) {
    py::dict d;
    d["kappa_j"] = e.kappa_j;
    d["level"] = e.level;
    d["nu"] = e.nu;
    d["energy"] = s.spectra.at(e.kappa_j).gap_value(e.level);
    out.append(d);
  }
  py::dict d;
  d["entries"] = out;
  d["total"] = s.occ.total();
  return d;
}

}  // namespace

PYBIND11_MODULE(_nopair, m) {
  m.doc() = "No-pair relativistic atomic structure: constants, SCF, Thomas-Fermi, pictures";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<AccuracyError>(m, "AccuracyError", PyExc_RuntimeError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

  py::class_<KappaConstants>(m, "KappaConstants")
      .def_readonly("kappa", &KappaConstants::kappa)
      .def_readonly("upsilon", &KappaConstants::upsilon)
      .def_readonly("eta", &KappaConstants::eta)
      .def_readonly("d", &KappaConstants::d)
      .def_readonly("c_lower", &KappaConstants::c_lower)
      .def_readonly("upper", &KappaConstants::upper);
  m.def("kappa_constants", &kappa_constants, py::arg("kappa"));
  m.def("is_admissible", &is_admissible, py::arg("kappa"), py::arg("kappa_prime"));
  m.def("region_boundary", &region_boundary, py::arg("kappa_prime"));
  m.def(
      "admissible_region",
      [](const std::vector<double>& k, const std::vector<double>& kp) {
        const AdmissibleRegion r = admissible_region(k, kp);
        return py::make_tuple(r.cell, r.boundary);
      },
      py::arg("kappa_grid"), py::arg("kappa_prime_grid"),
      "Returns (cells, boundary): cells[i][j] for (kappa[i], kappa_prime[j]).");

  m.def("dirac_level", py::overload_cast<double, int, int>(&dirac_level), py::arg("kappa"),
        py::arg("n"), py::arg("kappa_j"));
  m.def(
      "scott_furry",
      [](double kappa, int n_max) {
        const ScottEstimate e = scott_furry(kappa, n_max);
        return py::make_tuple(e.estimate, e.tail_error);
      },
      py::arg("kappa"), py::arg("n_max") = 400, "Returns (estimate, tail_error).");

  m.def("tf_slope", [] { return universal_solution().slope; });
  m.def("tf_coefficient", [] { return universal_solution().energy_coefficient; });
  m.def("tf_energy", &tf_energy, py::arg("z"));

  py::class_<ScfState>(m, "ScfState")
      .def_property_readonly("energy", [](const ScfState& s) { return s.energies.e_ha; })
      .def_property_readonly("e_h", [](const ScfState& s) { return s.energies.e_h; })
      .def_property_readonly("hartree", [](const ScfState& s) { return s.energies.hartree; })
      .def_property_readonly("converged", [](const ScfState& s) { return s.converged; })
      .def_property_readonly("iterations", [](const ScfState& s) { return s.iterations; })
      .def_property_readonly("fermi_level", [](const ScfState& s) { return s.mu; })
      .def_property_readonly("c", &ScfState::c)
      .def_property_readonly("r", [](const ScfState& s) { return Vec(s.grid()->r); })
      .def_property_readonly("radial_charge", [](const ScfState& s) { return Vec(s.rho.q); })
      .def_property_readonly("phi", [](const ScfState& s) { return Vec(s.phi); })
      .def_property_readonly("occupations", &occupations)
      .def_property_readonly("warnings", [](const ScfState& s) { return s.warnings; });

  m.def(
      "scf_solve",
      [](double z, double n, double kappa, int grid_n, double alpha, double tol, int kmax,
         int max_iter) {
        const ScfConfig cfg = make_config(z, n, kappa, grid_n, alpha, tol, kmax, max_iter);
        py::gil_scoped_release release;
        return scf_solve(cfg);
      },
      py::arg("z"), py::arg("n") = 0.0, py::arg("kappa") = 0.5, py::arg("grid_n") = 500,
      py::arg("alpha") = 0.3, py::arg("tol") = 1e-10, py::arg("kmax") = 0,
      py::arg("max_iter") = 300);

  m.def(
      "euler_check",
      [](const ScfState& s) {
        const EulerResidual r = euler_check(s);
        py::dict d;
        d["retraction_defect"] = r.retraction_defect;
        d["xc_norm"] = r.xc_norm;
        d["aufbau_violations"] = r.aufbau_violations;
        d["mu_in_band"] = r.mu_in_band;
        d["trace_defect"] = r.trace_defect;
        return d;
      },
      py::arg("state"));

  m.def("no_pair_boundedness", &no_pair_boundedness, py::arg("state"));

  m.def(
      "analyze_pictures",
      [](const ScfState& s, const std::vector<std::string>& names, bool operator_norms) {
        std::vector<PictureSpec> specs;
        for (const auto& n : names) specs.push_back(PictureSpec::parse(n));
        std::vector<PictureReport> reports;
        {
          py::gil_scoped_release release;
          reports = analyze_pictures(s, specs, operator_norms);
        }
        py::list out;
        for (const auto& r : reports) {
          py::dict d;
          d["picture"] = r.spec.name();
          d["e_h_star"] = r.dec.e_h_star;
          d["e_h_gamma_a"] = r.dec.e_h_gamma_a;
          d["I"] = r.dec.term_i;
          d["II"] = r.dec.term_ii;
          d["III"] = r.dec.term_iii;
          d["cross_check"] = r.dec.cross_check;
          d["identity_residual"] = r.dec.identity_residual;
          d["birman_norm"] = r.adm.birman_norm;
          d["trace_condition"] = r.adm.trace_condition;
          d["boundedness_slack"] = r.adm.boundedness_slack;
          out.append(d);
        }
        return out;
      },
      py::arg("state"), py::arg("pictures"), py::arg("operator_norms") = false);

  m.def(
      "fit_scott",
      [](const std::vector<double>& z, const std::vector<double>& e, py::object tf) {
        const ScottFit f = tf.is_none() ? fit_scott_free_tf(z, e) : fit_scott(z, e, tf.cast<double>());
        return py::make_tuple(f.estimate, f.stderr_estimate, f.slope, f.tf_coefficient);
      },
      py::arg("z"), py::arg("energies"), py::arg("tf_coefficient") = py::none(),
      "Returns (estimate, stderr, slope, tf_coefficient); tf_coefficient=None fits it too.");

  m.def(
      "config_hash", [](const std::string& text) { return config_hash(parse_config(text)); },
      py::arg("json_text"));
}
