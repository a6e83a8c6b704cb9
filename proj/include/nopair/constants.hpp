#pragma once

#include <utility>
#include <vector>

namespace nopair {

// Closed-form constants of the two-sided bound
//   C_kappa |D_0| <= |D_kappa| <= (1 + 2 kappa) |D_0|.
struct KappaConstants {
  double kappa = 0.0;
  double upsilon = 1.0;  // sqrt(1 - kappa^2)
  double eta = 1.0;
  double d = 1.0;
  double c_lower = 1.0;  // C_kappa
  double upper = 1.0;    // 1 + 2 kappa
};

KappaConstants kappa_constants(double kappa);

// Hardy-Littlewood-Sobolev constant (256 / (27 pi))^(1/3).
double hls_constant();
// Lower estimate of the Daubechies constant, 1.63 / 4^(1/3).
double daubechies_constant();

struct ExclusionConstants {
  double kappa = 0.0;
  double c_hls = 0.0;
  double c_d = 0.0;
  double c_prime = 0.0;
  double c_ret = 0.0;
  double c_ex = 0.0;
  double first_branch = 0.0;   // kappa^2 (c_hls / (c_prime c_d))^3
  double second_branch = 0.0;  // 8 (c_ret / c_prime)^6
  // True when c_prime and c_ret were defaulted rather than supplied.
  bool approximate_inputs = false;
};

ExclusionConstants exclusion_constant(double kappa, double c_prime, double c_ret);

// Defaults c_prime := C_kappa and c_ret := 1; the result is flagged
// approximate because neither default is a proven value.
ExclusionConstants exclusion_constant_default(double kappa);

// kappa' - 2 C_{kappa'} / pi: the smallest kappa for which (kappa, kappa')
// passes the numerical test, for kappa' in [0, 1).
double region_boundary(double kappa_prime);

bool is_admissible(double kappa, double kappa_prime);

struct AdmissibleRegion {
  std::vector<double> kappa;
  std::vector<double> kappa_prime;
  // cell[i][j] refers to (kappa[i], kappa_prime[j])
  std::vector<std::vector<bool>> cell;
  // (kappa_boundary, kappa_prime) points of the boundary curve, ordered by
  // kappa_prime
  std::vector<std::pair<double, double>> boundary;
};

AdmissibleRegion admissible_region(const std::vector<double>& kappa_grid,
                                   const std::vector<double>& kappa_prime_grid);

}  // namespace nopair
