#include <cmath>

#include "doctest.h"
#include "nopair/dirac_channel.hpp"
#include "nopair/errors.hpp"
#include "nopair/grid.hpp"

using namespace nopair;

namespace {

Vec sample(const RadialGrid& g, double (*f)(double)) {
  Vec v(g.n);
  for (int i = 0; i < g.n; ++i) v(i) = f(g.r(i));
  return v;
}

double quadrature_error(int n) {
  const GridPtr g = make_log_grid(1e-6, 60.0, n);
  // int_0^inf r^2 e^{-r} dr = 2
  const double v = integrate(*g, sample(*g, [](double r) { return r * r * std::exp(-r); }));
  return std::abs(v - 2.0);
}

}  // namespace

TEST_SUITE("grid") {
  TEST_CASE("construction") {
    const GridPtr g = make_log_grid(1e-5, 40.0, 300);
    CHECK(g->r_min() == 1e-5);
    CHECK(g->r_max() == 40.0);
    CHECK(g->r_half(0) == doctest::Approx(std::sqrt(g->r(0) * g->r(1))));
    CHECK(g->r_half(g->n - 1) > g->r_max());
    CHECK_THROWS_AS(make_log_grid(0.0, 1.0, 10), DomainError);
    CHECK_THROWS_AS(make_log_grid(2.0, 1.0, 10), DomainError);
    CHECK_THROWS_AS(make_log_grid(1e-3, 1.0, 1), DomainError);
  }

  TEST_CASE("exponential integrates to closed form") {
    const GridPtr g = make_log_grid(1e-6, 50.0, 500);
    const double v = integrate(*g, sample(*g, [](double r) { return std::exp(-r); }));
    CHECK(std::abs(v - (std::exp(-1e-6) - std::exp(-50.0))) < 1e-9);
  }

  TEST_CASE("cumulative integral ends at the full integral") {
    const GridPtr g = make_log_grid(1e-4, 30.0, 400);
    const Vec f = sample(*g, [](double r) { return r * std::exp(-r); });
    const Vec c = cumulative_integral(*g, f);
    CHECK(c(g->n - 1) == doctest::Approx(integrate(*g, f)).epsilon(1e-13));
    // F(r) = 1 - (1 + r) e^{-r} at an interior node
    const int i = 240;
    const double r = g->r(i), r0 = g->r(0);
    const double exact = (1.0 + r0) * std::exp(-r0) - (1.0 + r) * std::exp(-r);
    CHECK(std::abs(c(i) - exact) < 1e-8);
  }

  TEST_CASE("quadrature converges at fourth order") {
    const double e1 = quadrature_error(100), e2 = quadrature_error(200);
    CHECK(std::log2(e1 / e2) >= 3.5);
  }

  TEST_CASE("hydrogen 1s density is normalized") {
    const GridPtr g = make_log_grid(1e-6, 60.0, 400);
    // 4 pi r^2 |psi_1s|^2 = 4 r^2 e^{-2r}
    const double v = integrate(*g, sample(*g, [](double r) { return 4.0 * r * r * std::exp(-2.0 * r); }));
    CHECK(std::abs(v - 1.0) < 1e-9);
  }

  TEST_CASE("interpolation and derivative are exact on cubics in x") {
    const int n = 50;
    const double h = 0.1;
    Vec f(n), fh(n), df(n);
    auto p = [](double x) { return 1.0 + x - 0.3 * x * x + 0.05 * x * x * x; };
    auto dp = [](double x) { return 1.0 - 0.6 * x + 0.15 * x * x; };
    for (int i = 0; i < n; ++i) {
      f(i) = p(i * h);
      fh(i) = p((i + 0.5) * h);
      df(i) = dp((i + 0.5) * h);
    }
    const Vec half = interp_node_to_half(f);
    CHECK((half - fh).cwiseAbs().maxCoeff() < 1e-12);
    const Vec d = staggered_dx(n, h) * f;
    // the zero closure only affects the two ends
    CHECK((d - df).segment(1, n - 3).cwiseAbs().maxCoeff() < 1e-10);
  }
}
