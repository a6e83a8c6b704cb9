#include <cmath>

#include "doctest.h"
#include "nopair/errors.hpp"
#include "nopair/mittleman.hpp"

using namespace nopair;

namespace {

const ScfState& helium() {
  static const ScfState s = [] {
    ScfConfig c;
    c.z = 2.0;
    c.kappa = 0.5;
    c.grid.n = 300;
    return scf_solve(c);
  }();
  return s;
}

double term_ii_for(const ScfState& s, double eps) {
  Vec a = s.phi;
  for (int i = 0; i < s.grid()->n; ++i) {
    const double r = s.grid()->r(i);
    a(i) += eps * std::exp(-r * r);
  }
  return decompose(s, PictureSpec::custom(a)).term_ii;
}

}  // namespace

TEST_SUITE("mittleman") {
  TEST_CASE("first-order response of a 2x2 projector") {
    Vec lambda(2);
    lambda << -1.0, 1.0;
    Mat a(2, 2);
    a << 0.0, 0.3, 0.3, 0.0;
    const Mat q = first_order_response(lambda, a);
    CHECK(q(0, 1) == doctest::Approx(0.15));
    CHECK(q(1, 0) == doctest::Approx(0.15));
    CHECK(q(0, 0) == 0.0);
    // compare with the exact projector of diag(lambda) + eps a
    const double eps = 1e-5;
    const Mat h = Mat(lambda.asDiagonal()) + eps * a;
    const EigenPairs e = sym_eig(h);
    const Mat p = e.vectors.col(1) * e.vectors.col(1).transpose();
    CHECK((p(0, 1) / eps) == doctest::Approx(q(0, 1)).epsilon(1e-6));
    Vec same(2);
    same << 1.0, 1.0;
    CHECK(first_order_response(same, a).norm() == 0.0);
  }

  TEST_CASE("picture names") {
    CHECK(PictureSpec::parse("furry").kind == PictureKind::Furry);
    CHECK(PictureSpec::parse("free").kind == PictureKind::Free);
    CHECK(PictureSpec::parse("coulomb:0.25").kappa_prime == 0.25);
    CHECK(PictureSpec::parse("coulomb:0.25").name() == "coulomb:0.25");
    CHECK(PictureSpec::parse("meanfield").scale == 1.0);
    CHECK_THROWS_AS(PictureSpec::parse("coulomb:x"), ConfigError);
    CHECK_THROWS_AS(PictureSpec::parse("bogus"), ConfigError);
  }

  TEST_CASE("the mean-field picture has no second-order term") {
    const ScfState& s = helium();
    REQUIRE(s.converged);
    const Decomposition d = decompose(s, PictureSpec::mean_field());
    CHECK(std::abs(d.term_ii) < 1e-9);
    CHECK(d.cross_check < 1e-9);
    CHECK(d.identity_residual < 1e-7);
  }

  TEST_CASE("Coulomb pictures: signs and identity") {
    const ScfState& s = helium();
    for (double kp : {0.0, 0.25}) {
      const Decomposition d = decompose(s, PictureSpec::coulomb_prime(kp));
      CHECK(d.term_ii <= 1e-12);
      CHECK(d.term_iii >= 0.0);
      CHECK(d.cross_check <= 1e-8 * std::abs(d.e_h_star));
      CHECK(d.identity_residual < 1e-7);
      CHECK(d.bookkeeping < 1e-10);
    }
  }

  TEST_CASE("second-order term scales quadratically away from the mean field") {
    const ScfState& s = helium();
    const double ii1 = term_ii_for(s, 0.02);
    const double ii2 = term_ii_for(s, 0.04);
    CHECK(ii1 < 0.0);
    CHECK(ii2 / ii1 == doctest::Approx(4.0).epsilon(0.05));
  }

  TEST_CASE("no-pair boundedness and the trace condition") {
    const ScfState& s = helium();
    const double c2 = s.c() * s.c();
    CHECK(no_pair_boundedness(s) >= -1e-8 * c2);
    CHECK(trace_condition(PictureSpec::mean_field(), s) > 0.0);
    // kappa' = kappa means A = 0
    CHECK(std::abs(trace_condition(PictureSpec::coulomb_prime(0.5), s)) < 1e-14);
    CHECK(trace_condition(PictureSpec::furry(), s) == 0.0);
  }
}
