#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nopair/constants.hpp"
#include "nopair/errors.hpp"

using namespace nopair;

namespace {

// The closed forms again, in long double and without the special-value
// window, as a reference evaluation.
struct Reference {
  long double upsilon, eta, d, c_lower;
};

Reference reference(long double k) {
  const long double pi = std::numbers::pi_v<long double>;
  Reference r{};
  r.upsilon = std::sqrt(1.0L - k * k);
  const long double ct = std::cos(pi * r.upsilon / 2) / std::sin(pi * r.upsilon / 2);
  r.eta = (std::sqrt(9.0L + 4.0L * k * k) - 4.0L * k) / (3.0L * (1.0L - 2.0L * r.upsilon * ct));
  r.d = (1.0L - pi * r.upsilon * ct / 2.0L) * r.eta;
  r.c_lower = std::max(r.d * r.upsilon / (1.0L + r.d), 1.0L - 2.0L * k);
  return r;
}

}  // namespace

TEST_SUITE("constants") {
  TEST_CASE("zero coupling gives unit constants") {
    const KappaConstants k = kappa_constants(0.0);
    CHECK(k.upsilon == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(k.eta == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(k.d == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(k.c_lower == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(k.upper == 1.0);
  }

  TEST_CASE("special value at sqrt(3)/2 and continuity across it") {
    const double ks = std::sqrt(3.0) / 2.0;
    const KappaConstants k = kappa_constants(ks);
    CHECK(k.eta == doctest::Approx(1.0 / (std::sqrt(3.0) * (std::numbers::pi - 2.0))).epsilon(1e-14));
    const double left = kappa_constants(ks - 1e-7).c_lower;
    const double right = kappa_constants(ks + 1e-7).c_lower;
    CHECK(std::abs(left - k.c_lower) < 1e-6);
    CHECK(std::abs(right - k.c_lower) < 1e-6);
    // the generic formula is 0/0 there; its two-sided limit must match
    const long double lim = 0.5L * (reference(ks - 1e-5L).eta + reference(ks + 1e-5L).eta);
    CHECK(std::abs(static_cast<double>(lim) - k.eta) < 1e-9);
  }

  TEST_CASE("agreement with a long double evaluation") {
    for (double kappa : {0.05, 0.3, 0.5, 0.7, 0.9, 0.99}) {
      const KappaConstants k = kappa_constants(kappa);
      const Reference r = reference(kappa);
      CHECK(k.eta == doctest::Approx(static_cast<double>(r.eta)).epsilon(1e-12));
      CHECK(k.d == doctest::Approx(static_cast<double>(r.d)).epsilon(1e-12));
      CHECK(k.c_lower == doctest::Approx(static_cast<double>(r.c_lower)).epsilon(1e-12));
    }
    const KappaConstants k = kappa_constants(0.99);
    CHECK(k.c_lower > 0.0);
    CHECK(k.c_lower == doctest::Approx(k.d * k.upsilon / (1.0 + k.d)));
  }

  TEST_CASE("C_kappa bounds and monotonicity on a fine grid") {
    double prev = 2.0;
    for (int i = 0; i < 1000; ++i) {
      const KappaConstants k = kappa_constants(i * 1e-3);
      CHECK(k.c_lower > 0.0);
      CHECK(k.c_lower <= 1.0 + 1e-15);
      CHECK(k.c_lower <= k.upper);
      CHECK(k.c_lower <= prev + 1e-12);
      prev = k.c_lower;
    }
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(kappa_constants(-0.1), DomainError);
    CHECK_THROWS_AS(kappa_constants(1.0), DomainError);
    CHECK_THROWS_AS(kappa_constants(NAN), DomainError);
    CHECK_THROWS_AS(exclusion_constant(0.5, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(exclusion_constant(0.5, 1.0, -1.0), DomainError);
    CHECK_THROWS_AS(admissible_region({}, {0.1}), DomainError);
  }

  TEST_CASE("exclusion constant") {
    CHECK(hls_constant() <= 1.45);
    CHECK(daubechies_constant() >= 1.63 / std::cbrt(4.0) - 1e-15);
    const ExclusionConstants e = exclusion_constant(0.5, 1.0, 1.0);
    // (c_hls / c_d)^3 < 3, so 0.25 * that is below 8 and the second branch wins
    CHECK(std::pow(hls_constant() / daubechies_constant(), 3) < 3.0);
    CHECK(e.c_ex == doctest::Approx(32.0).epsilon(1e-15));
    const ExclusionConstants doubled = exclusion_constant(0.5, 1.0, 2.0);
    CHECK(doubled.c_ex / e.c_ex == doctest::Approx(64.0).epsilon(1e-14));
    CHECK(exclusion_constant(1e-9, 1.0, 1.0).c_ex < 1e-7);
    CHECK(exclusion_constant(0.5, 1.0, 1.5).c_ex > e.c_ex);
    CHECK(exclusion_constant(0.5, 1.5, 1.0).c_ex < e.c_ex);
    CHECK(exclusion_constant_default(0.5).approximate_inputs);
  }

  TEST_CASE("admissible region") {
    CHECK(is_admissible(0.5, 0.3));
    CHECK(is_admissible(0.5, -0.9));
    const double c06 = static_cast<double>(reference(0.6L).c_lower);
    CHECK(is_admissible(0.1, 0.6) == (0.6 < 0.1 + 2.0 * c06 / std::numbers::pi));
    const AdmissibleRegion r = admissible_region({0.1, 0.5}, {-0.9, 0.3, 0.6, 0.95});
    CHECK(r.cell[1][0]);
    CHECK(r.cell[1][1]);
    CHECK(r.cell[0][2] == is_admissible(0.1, 0.6));
    for (const auto& [kb, kp] : r.boundary) {
      CHECK(kb == doctest::Approx(region_boundary(kp)));
    }
  }
}
