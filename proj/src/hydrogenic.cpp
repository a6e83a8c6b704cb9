#include "nopair/hydrogenic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nopair/dirac_channel.hpp"
#include "nopair/errors.hpp"

namespace nopair {

namespace {

void check_level(double kappa, int n, int kappa_j) {
  if (!(kappa >= 0.0 && kappa < 1.0)) {
    throw DomainError("hydrogenic: kappa must lie in [0, 1)");
  }
  if (n < 1) throw DomainError("hydrogenic: principal number must be >= 1");
  if (kappa_j == 0 || std::abs(kappa_j) > n || kappa_j == n) {
    throw DomainError("hydrogenic: channel " + std::to_string(kappa_j) +
                      " does not occur in shell " + std::to_string(n));
  }
  if (static_cast<double>(kappa_j) * kappa_j <= kappa * kappa) {
    throw DomainError("hydrogenic: supercritical channel");
  }
}

double effective_n(double kappa, int n, int kappa_j) {
  const double kj = std::abs(kappa_j);
  return n - kj + std::sqrt(kj * kj - kappa * kappa);
}

int lowest_shell(int kappa_j) { return kappa_j < 0 ? -kappa_j : kappa_j + 1; }

}  // namespace

double dirac_binding(double kappa, int n, int kappa_j) {
  check_level(kappa, n, kappa_j);
  const double ne = effective_n(kappa, n, kappa_j);
  return std::expm1(-0.5 * std::log1p(kappa * kappa / (ne * ne)));
}

double dirac_level(double kappa, int n, int kappa_j) {
  return 1.0 + dirac_binding(kappa, n, kappa_j);
}

double dirac_level(double kappa, int n, int kappa_j, double c) {
  if (!(c > 0.0)) throw DomainError("dirac_level: c must be positive");
  return c * c * dirac_level(kappa, n, kappa_j);
}

double schrodinger_level(double kappa, int n) {
  if (n < 1) throw DomainError("schrodinger_level: n must be >= 1");
  return 1.0 - kappa * kappa / (2.0 * n * n);
}

std::vector<int> shell_channels(int n) {
  std::vector<int> out;
  for (int k = 1; k <= n; ++k) out.push_back(-k);
  for (int k = 1; k < n; ++k) out.push_back(k);
  return out;
}

LevelTable dirac_level_table(double kappa, int n_max) {
  LevelTable t;
  for (int n = 1; n <= n_max; ++n) {
    for (int kj : shell_channels(n)) {
      t.entries.push_back({n, kj, dirac_level(kappa, n, kj), 2 * std::abs(kj)});
    }
  }
  std::stable_sort(t.entries.begin(), t.entries.end(),
                   [](const LevelEntry& a, const LevelEntry& b) {
                     return a.energy < b.energy;
                   });
  return t;
}

std::vector<double> scott_furry_partial_sums(double kappa, int n_max) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw DomainError("scott_furry: kappa must lie in (0, 1)");
  }
  std::vector<double> out;
  out.reserve(n_max);
  double sum = 0.0;
  const double k2 = kappa * kappa;
  for (int n = 1; n <= n_max; ++n) {
    // Per level, lambda^D - lambda^S = (lambda^D - 1) + kappa^2 / (2 n^2);
    // both pieces are O(kappa^2) so the difference keeps full precision.
    double shell = 0.0;
    const double schr = k2 / (2.0 * n * n);
    for (int kj : shell_channels(n)) {
      shell += 2.0 * std::abs(kj) * (dirac_binding(kappa, n, kj) + schr);
    }
    sum += shell;
    out.push_back(sum / k2 + 0.5);
  }
  return out;
}

ScottEstimate scott_furry(double kappa, int n_max) {
  if (n_max < 8) throw DomainError("scott_furry: n_max must be >= 8");
  const std::vector<double> s = scott_furry_partial_sums(kappa, n_max);
  const int n3 = n_max;
  const int n2 = n_max / 2;
  const int n1 = n_max / 4;
  Eigen::Matrix3d a;
  Eigen::Vector3d rhs;
  const int ns[3] = {n1, n2, n3};
  for (int i = 0; i < 3; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = 1.0 / ns[i];
    a(i, 2) = 1.0 / (static_cast<double>(ns[i]) * ns[i]);
    rhs(i) = s[ns[i] - 1];
  }
  const Eigen::Vector3d coef = a.fullPivLu().solve(rhs);
  // Two-point extrapolation with the leading term only, for the error bar.
  const double two = (n3 * s[n3 - 1] - n2 * s[n2 - 1]) / (n3 - n2);
  ScottEstimate e;
  e.kappa = kappa;
  e.n_max = n_max;
  e.estimate = coef(0);
  e.tail_error = std::abs(coef(0) - two);
  if (!std::isfinite(e.estimate) || e.tail_error > 1e-3) {
    throw AccuracyError("scott_furry: tail extrapolation did not settle");
  }
  return e;
}

Vec br_channel_spectrum(GridPtr grid, double kappa, int kappa_j) {
  if (!(kappa >= 0.0 && kappa < 1.0)) {
    throw DomainError("br_channel_spectrum: kappa must lie in [0, 1)");
  }
  auto b = std::make_shared<const Mat>(kinetic_block(*grid, kappa_j));
  const ChannelOperator op =
      assemble_channel(grid, kappa_j, 1.0, coulomb_potential(*grid, kappa), b);
  const FreeChannel free(grid, kappa_j, 1.0, b);
  const Mat y = free.positive_basis();
  Mat hp = y.transpose() * op.apply(y);
  hp = 0.5 * (hp + hp.transpose());
  EigenPairs e = sym_eig_range(hp, 0.0, 1.0);
  Vec out = e.values;
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    const Vec v = e.vectors.col(k);
    out(k) = v.dot(hp * v) / v.squaredNorm();
  }
  std::sort(out.data(), out.data() + out.size());
  return out;
}

Vec dirac_channel_levels(GridPtr grid, double kappa, int kappa_j) {
  const ChannelOperator op =
      assemble_channel(grid, kappa_j, 1.0, coulomb_potential(*grid, kappa));
  const ChannelSpectrum s = diagonalize_gap(op);
  Vec out(s.gap_count());
  for (int k = 0; k < s.gap_count(); ++k) out(k) = s.gap_value(k);
  return out;
}

ScottBrEstimate scott_br(double kappa, GridPtr grid, int n_max, int levels, int kmax) {
  if (levels < 4) throw DomainError("scott_br: need at least four levels per channel");
  ScottBrEstimate out;
  out.furry = scott_furry(kappa, n_max);
  out.levels = levels;
  out.kmax = kmax;
  double correction = 0.0;
  double tail = 0.0;
  double last_channel = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    double channel_sum = 0.0;
    for (int kj : {-k, k}) {
      const Vec br = br_channel_spectrum(grid, kappa, kj);
      const Vec dirac = dirac_channel_levels(grid, kappa, kj);
      if (br.size() < levels || dirac.size() < levels) {
        throw AccuracyError("scott_br: grid supports only " +
                            std::to_string(std::min(br.size(), dirac.size())) +
                            " bound levels in channel " + std::to_string(kj));
      }
      double s = 0.0;
      for (int l = 0; l < levels; ++l) s += br(l) - dirac(l);
      // Level shifts of a short-range perturbation fall off like n^{-3}.
      const double n_last = lowest_shell(kj) + levels - 1;
      const double d_last = br(levels - 1) - dirac(levels - 1);
      const double t = d_last * std::pow(n_last, 3) / (2.0 * (n_last + 0.5) * (n_last + 0.5));
      s += t;
      tail += std::abs(t);
      channel_sum += 2.0 * std::abs(kj) * s;
    }
    correction += channel_sum;
    last_channel = channel_sum;
  }
  out.correction = correction / (kappa * kappa);
  out.estimate = out.furry.estimate + out.correction;
  out.tail_error = out.furry.tail_error + tail / (kappa * kappa) +
                   std::abs(last_channel) / (kappa * kappa);
  return out;
}

}  // namespace nopair
