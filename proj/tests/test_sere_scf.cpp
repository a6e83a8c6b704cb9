#include <cmath>

#include "doctest.h"
#include "nopair/errors.hpp"
#include "nopair/sere_scf.hpp"

using namespace nopair;

namespace {

ScfConfig config(double z, double n, double kappa = 0.5) {
  ScfConfig c;
  c.z = z;
  c.n_electrons = n;
  c.kappa = kappa;
  c.grid.n = 400;
  return c;
}

}  // namespace

TEST_SUITE("sere_scf") {
  TEST_CASE("one electron has no interaction") {
    const ScfConfig cfg = config(3.0, 1.0);
    const ScfState s = scf_solve(cfg);
    REQUIRE(s.converged);
    const double c = cfg.c();
    CHECK(s.energies.e_ha == doctest::Approx(c * c * (std::sqrt(0.75) - 1.0)).epsilon(1e-7));
    CHECK(s.phi.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("bare aufbau fills 1s, then splits the 2s/2p1/2 degeneracy") {
    const ScfConfig cfg = config(4.0, 4.0);
    const ChannelBasis basis(make_scf_grid(cfg), 2);
    const MeanField bare = mean_field_operator(RadialDensity::zero(basis.grid()), cfg, basis);
    const SpectrumSet spectra = diagonalize_channels(bare, 4);
    const OccupationTable two = aufbau(spectra, 2.0);
    CHECK(two.get(-1, 0) == 2.0);
    CHECK(two.total() == 2.0);
    const OccupationTable four = aufbau(spectra, 4.0, 1e-7);
    CHECK(four.get(-1, 0) == 2.0);
    // 2s1/2 and 2p1/2 are degenerate for the point nucleus: four states
    // share two electrons.
    CHECK(four.get(-1, 1) == doctest::Approx(1.0));
    CHECK(four.get(1, 0) == doctest::Approx(1.0));
    CHECK(four.total() == doctest::Approx(4.0));
  }

  TEST_CASE("helium energies and the Fermi-Amaldi bookkeeping") {
    const ScfConfig cfg = config(2.0, 2.0, 2.0 / 137.036);
    const ScfState s = scf_solve(cfg);
    REQUIRE(s.converged);
    // Dirac-Hartree-Fock ground state of helium: -2.86181 Hartree. With two
    // electrons in one orbital the Fermi-Amaldi term equals exchange.
    CHECK(s.energies.e_ha == doctest::Approx(-2.86181).epsilon(2e-5));
    CHECK(s.energies.e_h - s.energies.e_ha == doctest::Approx(s.energies.hartree / 2.0).epsilon(1e-12));
    CHECK(s.occ.get(-1, 0) == doctest::Approx(2.0));
    const EulerResidual e = euler_check(s);
    CHECK(e.aufbau_violations == 0);
    CHECK(e.mu_in_band);
    CHECK(e.trace_defect < 1e-10);
    CHECK(e.retraction_defect <= 1e-6 * e.xc_norm);
  }

  TEST_CASE("retraction contracts from the bare state") {
    const ScfConfig cfg = config(4.0, 4.0);
    const ChannelBasis basis(make_scf_grid(cfg), cfg.channel_cutoff());
    const MeanField bare = mean_field_operator(RadialDensity::zero(basis.grid()), cfg, basis);
    const SpectrumSet spectra = diagonalize_channels(bare, cfg.levels_per_channel);
    const GeneralState g = general_state(frozen_state(cfg, aufbau(spectra, 4.0)));
    CHECK(g.trace() == doctest::Approx(4.0).epsilon(1e-12));
    const ThetaResult th = theta(g, 1e-8 * xc_norm(g), 100);
    REQUIRE(!th.ratios.empty());
    for (double r : th.ratios) CHECK(r < 1.0);
  }

  TEST_CASE("configuration errors") {
    ScfConfig c = config(2.0, 2.0);
    c.kappa = 1.2;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = config(2.0, 2.0);
    c.alpha = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = config(2.0, 5.0);
    CHECK_THROWS_AS(c.validate(), ConfigError);
  }

  TEST_CASE("non-convergence is reported") {
    ScfConfig c = config(10.0, 10.0);
    c.max_iter = 2;
    const ScfState s = scf_solve(c);
    CHECK(!s.converged);
    CHECK(s.iterations == 2);
  }
}
