#include "nopair/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nopair/errors.hpp"

namespace nopair {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpecialKappa = 0.8660254037844386;  // sqrt(3) / 2
constexpr double kSpecialWindow = 1e-8;

double cot(double x) { return std::cos(x) / std::sin(x); }

}  // namespace

KappaConstants kappa_constants(double kappa) {
  if (!(kappa >= 0.0 && kappa < 1.0)) {
    throw DomainError("kappa_constants: kappa must lie in [0, 1), got " +
                      std::to_string(kappa));
  }
  KappaConstants k;
  k.kappa = kappa;
  k.upsilon = std::sqrt(1.0 - kappa * kappa);
  const double ct = cot(kPi * k.upsilon / 2.0);
  if (std::abs(kappa - kSpecialKappa) < kSpecialWindow) {
    k.eta = 1.0 / (std::sqrt(3.0) * (kPi - 2.0));
  } else {
    k.eta = (std::sqrt(9.0 + 4.0 * kappa * kappa) - 4.0 * kappa) /
            (3.0 * (1.0 - 2.0 * k.upsilon * ct));
  }
  k.d = (1.0 - kPi * k.upsilon * ct / 2.0) * k.eta;
  k.c_lower = std::max(k.d * k.upsilon / (1.0 + k.d), 1.0 - 2.0 * kappa);
  k.upper = 1.0 + 2.0 * kappa;
  return k;
}

double hls_constant() { return std::cbrt(256.0 / (27.0 * kPi)); }

double daubechies_constant() { return 1.63 / std::cbrt(4.0); }

ExclusionConstants exclusion_constant(double kappa, double c_prime, double c_ret) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw DomainError("exclusion_constant: kappa must lie in (0, 1)");
  }
  if (!(c_prime > 0.0) || !(c_ret > 0.0)) {
    throw DomainError("exclusion_constant: c_prime and c_ret must be positive");
  }
  ExclusionConstants e;
  e.kappa = kappa;
  e.c_hls = hls_constant();
  e.c_d = daubechies_constant();
  e.c_prime = c_prime;
  e.c_ret = c_ret;
  e.first_branch = kappa * kappa * std::pow(e.c_hls / (c_prime * e.c_d), 3);
  e.second_branch = 8.0 * std::pow(c_ret / c_prime, 6);
  e.c_ex = 8.0 * kappa * std::max(e.first_branch, e.second_branch);
  return e;
}

ExclusionConstants exclusion_constant_default(double kappa) {
  ExclusionConstants e =
      exclusion_constant(kappa, kappa_constants(kappa).c_lower, 1.0);
  e.approximate_inputs = true;
  return e;
}

double region_boundary(double kappa_prime) {
  return kappa_prime - 2.0 * kappa_constants(kappa_prime).c_lower / kPi;
}

bool is_admissible(double kappa, double kappa_prime) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw DomainError("is_admissible: kappa must lie in (0, 1)");
  }
  if (!(kappa_prime > -1.0 && kappa_prime < 1.0)) {
    throw DomainError("is_admissible: kappa' must lie in (-1, 1)");
  }
  if (kappa_prime <= kappa) return true;
  return kappa_prime < kappa + 2.0 * kappa_constants(kappa_prime).c_lower / kPi;
}

AdmissibleRegion admissible_region(const std::vector<double>& kappa_grid,
                                   const std::vector<double>& kappa_prime_grid) {
  if (kappa_grid.empty() || kappa_prime_grid.empty()) {
    throw DomainError("admissible_region: empty grid");
  }
  AdmissibleRegion out;
  out.kappa = kappa_grid;
  out.kappa_prime = kappa_prime_grid;

  // C_{kappa'} only depends on the column, so evaluate it once per column.
  std::vector<double> threshold(kappa_prime_grid.size(), 0.0);
  for (std::size_t j = 0; j < kappa_prime_grid.size(); ++j) {
    const double kp = kappa_prime_grid[j];
    if (!(kp > -1.0 && kp < 1.0)) {
      throw DomainError("admissible_region: kappa' outside (-1, 1)");
    }
    threshold[j] = kp >= 0.0 ? region_boundary(kp) : -2.0;
  }
  out.cell.assign(kappa_grid.size(),
                  std::vector<bool>(kappa_prime_grid.size(), false));
  for (std::size_t i = 0; i < kappa_grid.size(); ++i) {
    const double k = kappa_grid[i];
    if (!(k > 0.0 && k < 1.0)) {
      throw DomainError("admissible_region: kappa outside (0, 1)");
    }
    for (std::size_t j = 0; j < kappa_prime_grid.size(); ++j) {
      const double kp = kappa_prime_grid[j];
      out.cell[i][j] = kp <= k || k > threshold[j];
    }
  }
  std::vector<double> sorted = kappa_prime_grid;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (double kp : sorted) {
    if (kp < 0.0) continue;
    out.boundary.emplace_back(region_boundary(kp), kp);
  }
  return out;
}

}  // namespace nopair
