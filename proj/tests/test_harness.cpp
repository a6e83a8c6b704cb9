#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "nopair/errors.hpp"
#include "nopair/harness.hpp"

using namespace nopair;

namespace {

std::vector<double> zs() { return {20, 30, 40, 55, 70, 90}; }

RunConfig small_config() {
  RunConfig c = parse_config(R"({"grid": {"n": 150}, "scf": {"tol_energy": 1e-8, "tol_density": 1e-8}})");
  return c;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("fit recovers exact synthetic coefficients") {
    const double ctf = -0.7687, s = 0.2658, d = -0.31;
    std::vector<double> e;
    for (double z : zs()) {
      e.push_back(ctf * std::pow(z, 7.0 / 3.0) + s * z * z + d * std::pow(z, 5.0 / 3.0));
    }
    const ScottFit f = fit_scott(zs(), e, ctf);
    CHECK(f.estimate == doctest::Approx(s).epsilon(1e-10));
    CHECK(f.slope == doctest::Approx(d).epsilon(1e-9));
    CHECK(f.stderr_estimate < 1e-10);
    CHECK(f.rows == 6);
    const ScottFit g = fit_scott_free_tf(zs(), e);
    CHECK(g.tf_coefficient == doctest::Approx(ctf).epsilon(1e-10));
    CHECK(g.estimate == doctest::Approx(s).epsilon(1e-8));
    CHECK(g.free_tf);
  }

  TEST_CASE("a wrong Thomas-Fermi constant biases the intercept") {
    // E = c Z^{7/3} + s Z^2 fitted with c + delta: the residual / Z^2 gains
    // -delta Z^{1/3}, which the linear model in Z^{-1/3} cannot absorb.
    const double ctf = -0.7687, s = 0.2658;
    std::vector<double> e;
    for (double z : zs()) e.push_back(ctf * std::pow(z, 7.0 / 3.0) + s * z * z);
    const ScottFit f = fit_scott(zs(), e, ctf + 1e-3);
    CHECK(std::abs(f.estimate - s) > 1e-3);
  }

  TEST_CASE("fit errors") {
    CHECK_THROWS_AS(fit_scott({20, 30, 40}, {1, 2, 3}, -0.7), DomainError);
    CHECK_THROWS_AS(fit_scott({20, 30}, {1, 2, 3}, -0.7), DomainError);
    CHECK_THROWS_AS(fit_scott({20, 20, 20, 20}, {1, 1, 1, 1}, -0.7), DomainError);
  }

  TEST_CASE("configuration parsing and hashing") {
    const RunConfig a = parse_config("{}");
    const RunConfig b = parse_config(R"({"scf": {"kappa": 0.5}})");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    const RunConfig c = parse_config(R"({"scf": {"kappa": 0.4}})");
    CHECK(config_hash(a) != config_hash(c));
    CHECK(config_json(parse_config(config_json(c))) == config_json(c));
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scf": {"kapa": 0.4}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"extra": {}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scf": {"kappa": "x"}})"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  }

  TEST_CASE("CSV round trip") {
    CsvTable t;
    t.hash = "0123456789abcdef";
    t.columns = {"a", "b"};
    t.add_row({format_number(1.5), format_number(NAN)});
    std::stringstream ss;
    t.write(ss);
    CHECK(ss.str().rfind("# config_hash=0123456789abcdef\n", 0) == 0);
    const CsvTable back = CsvTable::read(ss);
    CHECK(back.hash == t.hash);
    CHECK(back.columns == t.columns);
    CHECK(back.rows == t.rows);
    CHECK_THROWS(t.add_row({"1"}));
  }

  TEST_CASE("sweep is deterministic and resumes from its table") {
    const RunConfig cfg = small_config();
    SweepOptions opt;
    opt.z = {2.0, 3.0};
    opt.kappa = 0.5;
    opt.pictures = {PictureSpec::coulomb_prime(0.0)};
    const std::string path =
        (std::filesystem::temp_directory_path() / "nopair_resume_test.csv").string();
    std::filesystem::remove(path);
    opt.persist_path = path;
    const std::vector<SweepRow> first = sweep(opt, cfg);
    REQUIRE(first.size() == 2);
    CHECK(first[0].converged);

    opt.persist_path.clear();
    const std::vector<SweepRow> again = sweep(opt, cfg);
    CHECK(again[1].e_s == first[1].e_s);
    CHECK(again[1].pictures[0].term_ii == first[1].pictures[0].term_ii);

    // Rows already on disk are reused: mark one and read it back.
    CsvTable t = CsvTable::load(path);
    t.rows[1][5] = "12345";
    t.save(path);
    opt.persist_path = path;
    CHECK(sweep(opt, cfg)[1].e_s == 12345.0);
    // A different configuration ignores the stale table.
    RunConfig other = cfg;
    other.alpha = 0.35;
    CHECK(sweep(opt, other)[1].e_s == doctest::Approx(first[1].e_s).epsilon(1e-7));

    const std::vector<SweepRow> parsed = sweep_rows(sweep_table(first, config_hash(cfg)));
    CHECK(parsed[0].e_s == doctest::Approx(first[0].e_s).epsilon(1e-11));
    CHECK(parsed[0].pictures[0].picture == "coulomb:0");
    std::filesystem::remove(path);
  }
}
