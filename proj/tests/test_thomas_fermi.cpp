#include <cmath>

#include "doctest.h"
#include "nopair/errors.hpp"
#include "nopair/thomas_fermi.hpp"

using namespace nopair;

TEST_SUITE("thomas_fermi") {
  TEST_CASE("universal slope and energy coefficient") {
    const TFSolution& tf = universal_solution();
    // tabulated value of -y'(0) for the neutral atom
    CHECK(tf.slope == doctest::Approx(1.588071022611375).epsilon(1e-9));
    // E^TF / Z^{7/3} = -(3/7) b (3 pi / 4)^{2/3} / 2 = -0.768745
    CHECK(tf.energy_coefficient == doctest::Approx(-0.7687450).epsilon(1e-6));
  }

  TEST_CASE("solution shape") {
    const TFSolution& tf = universal_solution();
    Vec xs(4);
    xs << 0.0, 1.0, 10.0, 1e3;
    const Vec y = tf.evaluate(xs);
    CHECK(y(0) == doctest::Approx(1.0));
    CHECK(y(1) == doctest::Approx(0.4240080).epsilon(1e-6));
    CHECK(y(2) == doctest::Approx(0.02431429).epsilon(1e-5));
    // the Sommerfeld tail approaches 144 / x^3 from below
    CHECK(y(3) * 1e9 < 144.0);
    CHECK(y(3) * 1e9 > 100.0);
    for (Eigen::Index i = 1; i < tf.y.size(); ++i) CHECK(tf.y(i) < tf.y(i - 1));
  }

  TEST_CASE("virial theorem and Z^{7/3} scaling") {
    for (double z : {1.0, 10.0, 100.0}) {
      const TFEnergy e = tf_energy_components(z);
      CHECK(std::abs(e.total + e.kinetic) / std::abs(e.total) < 1e-6);
      CHECK(e.electrons == doctest::Approx(z).epsilon(1e-6));
      CHECK(tf_energy(z) / std::pow(z, 7.0 / 3.0) ==
            doctest::Approx(universal_solution().energy_coefficient).epsilon(1e-10));
    }
  }

  TEST_CASE("density integrates to Z") {
    const double z = 20.0;
    const GridPtr g = make_log_grid(1e-7, 1e4, 2000);
    const RadialDensity rho = tf_density(z, g);
    CHECK(rho.total() == doctest::Approx(z).epsilon(1e-3));
    CHECK(coulomb_distance(rho, z) < 1e-6 * z * z);
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(solve_universal(0.0), DomainError);
    CHECK_THROWS_AS(tf_energy(-1.0), DomainError);
  }
}
