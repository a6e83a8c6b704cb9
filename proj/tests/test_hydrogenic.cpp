#include <cmath>
#include <map>

#include "doctest.h"
#include "nopair/errors.hpp"
#include "nopair/hydrogenic.hpp"

using namespace nopair;

TEST_SUITE("hydrogenic") {
  TEST_CASE("ground state and nonrelativistic limit") {
    CHECK(dirac_level(0.5, 1, -1) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
    CHECK(dirac_level(0.5, 1, -1, 10.0) == doctest::Approx(100.0 * std::sqrt(0.75)).epsilon(1e-15));
    // binding -> -kappa^2 / (2 n^2) as kappa -> 0
    for (int n = 1; n <= 4; ++n) {
      const double k = 1e-4;
      CHECK(dirac_binding(k, n, -1) == doctest::Approx(-k * k / (2.0 * n * n)).epsilon(1e-7));
      CHECK(schrodinger_level(k, n) == doctest::Approx(1.0 - k * k / (2.0 * n * n)));
    }
    // 2s1/2 and 2p1/2 share kappa_j magnitude 1 and are degenerate
    CHECK(dirac_level(0.5, 2, -1) == doctest::Approx(dirac_level(0.5, 2, 1)).epsilon(1e-15));
    CHECK(dirac_binding(0.3, 3, 2) == doctest::Approx(dirac_level(0.3, 3, 2) - 1.0).epsilon(1e-12));
  }

  TEST_CASE("shell multiplicities are 2 n^2") {
    const LevelTable t = dirac_level_table(0.5, 6);
    std::map<int, int> count;
    for (const auto& e : t.entries) count[e.n] += e.multiplicity;
    for (int n = 1; n <= 6; ++n) {
      CHECK(count[n] == 2 * n * n);
      CHECK(shell_channels(n).size() == static_cast<std::size_t>(2 * n - 1));
    }
    for (std::size_t i = 1; i < t.entries.size(); ++i) {
      CHECK(t.entries[i].energy >= t.entries[i - 1].energy);
    }
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(dirac_level(1.0, 1, -1), DomainError);
    CHECK_THROWS_AS(dirac_level(0.5, 1, 1), DomainError);
    CHECK_THROWS_AS(dirac_level(0.5, 2, -3), DomainError);
    CHECK_THROWS_AS(scott_furry(0.5, 4), DomainError);
  }

  TEST_CASE("Scott sum against a high-precision reference") {
    // 30-digit partial sums to n = 2000 and n = 4000, extrapolated in 1/n:
    // 0.2658776 - (0.2659556 - 0.2658776) = 0.265800
    const ScottEstimate e = scott_furry(0.5, 400);
    CHECK(std::abs(e.estimate - 0.265800) < 5e-6);
    CHECK(e.tail_error < 1e-4);
    const std::vector<double> s = scott_furry_partial_sums(0.5, 50);
    CHECK(s[0] == doctest::Approx(0.5 + 2.0 * (std::sqrt(0.75) - 1.0 + 0.125) / 0.25));
    // every level is below its nonrelativistic counterpart
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] < s[i - 1]);
  }

  TEST_CASE("projected levels lie below the Dirac levels") {
    const GridPtr g = make_log_grid(2e-6, 300.0, 400);
    for (int kj : {-1, 1}) {
      const Vec br = br_channel_spectrum(g, 0.5, kj);
      const Vec d = dirac_channel_levels(g, 0.5, kj);
      REQUIRE(br.size() >= 4);
      REQUIRE(d.size() >= 4);
      for (int k = 0; k < 4; ++k) CHECK(br(k) < d(k));
    }
  }
}
