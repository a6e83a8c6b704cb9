#include <cmath>

#include "doctest.h"
#include "nopair/dirac_channel.hpp"
#include "nopair/errors.hpp"
#include "nopair/hydrogenic.hpp"

using namespace nopair;

TEST_SUITE("dirac_channel") {
  TEST_CASE("2x2 projector in closed form") {
    // H = [[a, b], [b, -a]] has eigenvalues +-s, s = sqrt(a^2 + b^2), and
    // positive projector (1 + H / s) / 2.
    const double a = 0.7, b = 0.4, s = std::hypot(a, b);
    Mat h(2, 2);
    h << a, b, b, -a;
    const Mat exact = 0.5 * (Mat::Identity(2, 2) + h / s);
    const Mat p = resolvent_projector(h, 1e4, 2000);
    CHECK((p - exact).norm() < 1e-9);
    CHECK_THROWS_AS(resolvent_projector(h, 1.0, 100), AccuracyError);
    CHECK_THROWS_AS(resolvent_projector(Mat::Zero(2, 3), 10.0, 100), DomainError);
  }

  TEST_CASE("Coulomb channel levels follow the Sommerfeld formula") {
    const double kappa = 0.5;
    const GridPtr g = make_log_grid(2e-6, 400.0, 800);
    for (int kj : {-1, -2, 1, 2}) {
      const Vec lv = dirac_channel_levels(g, kappa, kj);
      REQUIRE(lv.size() >= 3);
      const int n0 = kj < 0 ? -kj : kj + 1;
      for (int k = 0; k < 3; ++k) {
        const double exact = dirac_level(kappa, n0 + k, kj);
        CHECK(std::abs(lv(k) - exact) / exact < 2e-5);
      }
    }
  }

  TEST_CASE("spectral projector properties") {
    const GridPtr g = make_log_grid(1e-3, 20.0, 60);
    const ChannelOperator op = assemble_channel(g, -1, 3.0, coulomb_potential(*g, 1.5));
    const ChannelSpectrum s = diagonalize(op);
    CHECK(s.complete);
    const Mat p = positive_projector(s);
    const Mat h = op.matrix();
    CHECK((p * p - p).norm() < 1e-10);
    CHECK((p * h - h * p).norm() < 1e-9 * h.norm());
    // half of a Dirac matrix's spectrum is positive
    CHECK(p.trace() == doctest::Approx(op.n()).epsilon(1e-12));
    const Mat pr = resolvent_projector(h, 1e3 * h.norm(), 3000);
    CHECK((pr - p).norm() < 1e-6);
  }

  TEST_CASE("gap solver agrees with the full solver") {
    const GridPtr g = make_log_grid(1e-5, 60.0, 300);
    const ChannelOperator op = assemble_channel(g, 2, 2.0, coulomb_potential(*g, 1.0));
    const ChannelSpectrum full = diagonalize(op);
    const ChannelSpectrum gap = diagonalize_gap(op, 5);
    REQUIRE(gap.gap_count() == 5);
    for (int k = 0; k < 5; ++k) {
      CHECK(gap.gap_value(k) == doctest::Approx(full.gap_value(k)).epsilon(1e-11));
      CHECK(std::abs(gap.gap_vector(k).dot(full.gap_vector(k))) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }

  TEST_CASE("free channel closed form") {
    const GridPtr g = make_log_grid(1e-3, 20.0, 40);
    const double c = 1.7;
    const FreeChannel f(g, -2, c);
    const Mat h0 = assemble_channel(g, -2, c, zero_potential(*g)).matrix();
    CHECK((f.abs_power(2.0) - h0 * h0).norm() < 1e-9 * (h0 * h0).norm());
    CHECK((f.abs_power(0.5) * f.abs_power(0.5) - f.abs_power(1.0)).norm() < 1e-9 * f.abs_power(1.0).norm());
    const Mat x = Mat::Random(2 * g->n, 3);
    CHECK((f.apply_abs_power(-1.0, x) - f.abs_power(-1.0) * x).norm() < 1e-12 * x.norm());
    // columns follow the singular values, largest first
    const Mat pb = f.positive_basis();
    CHECK((pb.transpose() * h0 * pb - Mat(f.positive_energies().reverse().asDiagonal())).norm() < 1e-9 * h0.norm());
  }

  TEST_CASE("operator order") {
    Mat a = Mat::Identity(3, 3);
    Mat b = 2.0 * Mat::Identity(3, 3);
    CHECK(operator_order(a, b) == doctest::Approx(1.0));
    CHECK(operator_order(b, a) == doctest::Approx(-1.0));
  }
}
