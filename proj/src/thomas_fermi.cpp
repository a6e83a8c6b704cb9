#include "nopair/thomas_fermi.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <numeric>

#include "nopair/errors.hpp"

namespace nopair {

namespace {

namespace odeint = boost::numeric::odeint;

// (y, y', int sqrt(x) y^{3/2}, int y^{3/2}/sqrt(x), int y^{5/2}/sqrt(x))
using State = std::array<double, 5>;

constexpr double kOdeTol = 1e-14;
const double kBeta = (std::sqrt(73.0) - 7.0) / 2.0;
// Coefficients of w(t) = 1 + t + a2 t^2 + ... from substituting the
// series into the equation.
constexpr std::array<double, 6> kTail = {1.0, 1.0, 0.62569749778234893836,
                                         0.31338611507330941366, 0.13739127671937117623,
                                         0.055083434664149057015};

void rhs(const State& s, State& d, double x) {
  const double y = std::max(s[0], 0.0);
  const double y32 = y * std::sqrt(y);
  const double rx = std::sqrt(x);
  d[0] = s[1];
  d[1] = y32 / rx;
  d[2] = rx * y32;
  d[3] = y32 / rx;
  d[4] = y32 * y / rx;
}

auto stepper() {
  return odeint::make_controlled(kOdeTol, kOdeTol, odeint::runge_kutta_fehlberg78<State>());
}

// Same system in s = sqrt(x), which is smooth at the origin:
// dy/ds = 2 s y', dy'/ds = 2 y^{3/2}.
void rhs_s(const State& st, State& d, double s) {
  const double y = std::max(st[0], 0.0);
  const double y32 = y * std::sqrt(y);
  d[0] = 2.0 * s * st[1];
  d[1] = 2.0 * y32;
  d[2] = 2.0 * s * s * y32;
  d[3] = 2.0 * y32;
  d[4] = 2.0 * y32 * y;
}

State origin_state(double b) { return State{1.0, -b, 0.0, 0.0, 0.0}; }

// y and y' from the large-x series.
std::array<double, 2> far_state(double f, double x) {
  const double t = f * std::pow(x, -kBeta);
  double w = 0.0;
  double dw = 0.0;  // dw/dt
  for (int k = static_cast<int>(kTail.size()) - 1; k >= 0; --k) {
    w = w * t + kTail[k];
    if (k > 0) dw = dw * t + k * kTail[k];
  }
  const double x3 = x * x * x;
  const double y = 144.0 / x3 * w;
  // dt/dx = -beta t / x
  const double dy = -3.0 * y / x + 144.0 / x3 * dw * (-kBeta * t / x);
  return {y, dy};
}

State shoot_out(double b, double x1) {
  State s = origin_state(b);
  odeint::integrate_adaptive(stepper(), rhs_s, s, 0.0, std::sqrt(x1), 1e-3);
  return s;
}

// Integrals accumulate as -int_x^{x_far} since x decreases.
State shoot_in(double f, double x_far, double x1) {
  const auto ys = far_state(f, x_far);
  State s{ys[0], ys[1], 0.0, 0.0, 0.0};
  odeint::integrate_adaptive(stepper(), rhs, s, x_far, x1, -1e-2);
  return s;
}

TFEnergy energy_from(const TFSolution& sol, double z) {
  const double pi = std::numbers::pi;
  const double a = tf_length_constant() * std::cbrt(1.0 / z);
  // rho(r) = (2 Z y / (a x))^{3/2} / (3 pi^2), r = a x.
  const double dens = std::pow(2.0 * z / a, 1.5) / (3.0 * pi * pi);
  TFEnergy e;
  e.electrons = 4.0 * pi * a * a * a * dens * sol.norm_integral;
  e.attraction = -z * 4.0 * pi * a * a * dens * sol.attraction_integral;
  e.kinetic = tf_kinetic_constant() * 4.0 * pi * a * a * a * std::pow(2.0 * z / a, 2.5) /
              std::pow(3.0 * pi * pi, 5.0 / 3.0) * sol.kinetic_integral;
  // Electron potential Z (1 - y) / r from the screening relation.
  e.repulsion = 0.5 * z * 4.0 * pi * a * a * dens *
                (sol.attraction_integral - sol.kinetic_integral);
  e.total = e.kinetic + e.attraction + e.repulsion;
  return e;
}

}  // namespace

double tf_length_constant() { return std::cbrt(9.0 * std::numbers::pi * std::numbers::pi / 128.0); }

double tf_kinetic_constant() {
  return 0.3 * std::pow(3.0 * std::numbers::pi * std::numbers::pi, 2.0 / 3.0);
}

TFSolution solve_universal(double tol) {
  if (!(tol > 0.0)) throw DomainError("solve_universal: tol must be positive");
  TFSolution sol;
  const double xm = sol.x_match;
  const double xr = sol.x_far;

  // Bracket b by the fate of the outward solution: too steep a start
  // crosses zero, too shallow a start turns upward.
  auto fate = [&](double b) {
    State s = origin_state(b);
    auto st = stepper();
    double sx = 0.0;
    double dt = 1e-3;
    while (sx * sx < 60.0) {
      odeint::controlled_step_result r;
      do {
        r = st.try_step(rhs_s, s, sx, dt);
      } while (r == odeint::fail);
      if (s[0] < 0.0) return 1;
      if (s[1] > 0.0) return -1;
    }
    return 0;
  };
  double lo = 1.5;
  double hi = 1.7;
  if (fate(lo) != -1 || fate(hi) != 1) {
    throw NumericError("solve_universal: slope bracket [1.5, 1.7] does not straddle the solution");
  }
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    const int f = fate(mid);
    if (f == 1) {
      hi = mid;
    } else if (f == -1) {
      lo = mid;
    } else {
      lo = hi = mid;
      break;
    }
  }
  double b = 0.5 * (lo + hi);

  // Starting F: match y alone at x_match.
  const double y_out = shoot_out(b, xm)[0];
  double fa = -20.0;
  double fb = 0.0;
  auto gap = [&](double f) { return shoot_in(f, xr, xm)[0] - y_out; };
  double ga = gap(fa);
  double gb = gap(fb);
  if (ga * gb > 0.0) throw NumericError("solve_universal: could not bracket the tail parameter");
  for (int it = 0; it < 60; ++it) {
    const double fm = 0.5 * (fa + fb);
    const double gm = gap(fm);
    if ((gm < 0.0) == (ga < 0.0)) {
      fa = fm;
      ga = gm;
    } else {
      fb = fm;
    }
  }
  double f = 0.5 * (fa + fb);

  auto residual = [&](double bb, double ff) {
    const State o = shoot_out(bb, xm);
    const State i = shoot_in(ff, xr, xm);
    return Eigen::Vector2d(o[0] - i[0], o[1] - i[1]);
  };
  Eigen::Vector2d r = residual(b, f);
  int it = 0;
  for (; it < 30 && r.norm() > tol; ++it) {
    const double db = 1e-7;
    const double df = 1e-6 * std::max(1.0, std::abs(f));
    Eigen::Matrix2d j;
    j.col(0) = (residual(b + db, f) - r) / db;
    j.col(1) = (residual(b, f + df) - r) / df;
    const Eigen::Vector2d step = j.fullPivLu().solve(r);
    b -= step(0);
    f -= step(1);
    r = residual(b, f);
  }
  if (r.norm() > tol) {
    throw AccuracyError("solve_universal: matching residual " + std::to_string(r.norm()) +
                        " above tolerance");
  }

  sol.slope = b;
  sol.tail_f = f;
  const State o = shoot_out(b, xm);
  const State i = shoot_in(f, xr, xm);
  sol.y_match = o[0];
  sol.dy_match = o[1];
  const double x3 = xr * xr * xr;
  sol.norm_integral = o[2] - i[2] + 576.0 / x3;
  sol.attraction_integral = o[3] - i[3] + 432.0 / (x3 * xr);
  sol.kinetic_integral = o[4] - i[4] + std::pow(144.0, 2.5) / (7.0 * std::pow(xr, 7.0));

  const int samples = 800;
  sol.x.resize(samples);
  for (int k = 0; k < samples; ++k) {
    sol.x(k) = std::exp(std::log(1e-4) + (std::log(sol.x_max) - std::log(1e-4)) * k / (samples - 1));
  }
  sol.y = sol.evaluate(sol.x);

  sol.energy_coefficient = energy_from(sol, 1.0).total;
  return sol;
}

const TFSolution& universal_solution() {
  static const TFSolution sol = solve_universal();
  return sol;
}

Vec TFSolution::evaluate(const Vec& xs) const {
  Vec out(xs.size());
  std::vector<Eigen::Index> inner;
  std::vector<Eigen::Index> middle;
  for (Eigen::Index k = 0; k < xs.size(); ++k) {
    const double xv = xs(k);
    if (!(xv >= 0.0)) throw DomainError("TFSolution::evaluate: x must be nonnegative");
    if (xv <= x_match) {
      inner.push_back(k);
    } else if (xv < x_far) {
      middle.push_back(k);
    } else {
      out(k) = far_state(tail_f, xv)[0];
    }
  }
  std::sort(inner.begin(), inner.end(), [&](auto a, auto b) { return xs(a) < xs(b); });
  State s = origin_state(slope);
  double sx = 0.0;
  for (auto k : inner) {
    const double target = std::sqrt(xs(k));
    if (target > sx) odeint::integrate_adaptive(stepper(), rhs_s, s, sx, target, 1e-3);
    sx = target;
    out(k) = s[0];
  }
  double x = x_far;
  std::sort(middle.begin(), middle.end(), [&](auto a, auto b) { return xs(a) > xs(b); });
  const auto far = far_state(tail_f, x_far);
  s = State{far[0], far[1], 0.0, 0.0, 0.0};
  for (auto k : middle) {
    if (xs(k) < x) odeint::integrate_adaptive(stepper(), rhs, s, x, xs(k), -1e-2);
    x = xs(k);
    out(k) = s[0];
  }
  return out;
}

TFEnergy tf_energy_components(double z) {
  if (!(z > 0.0)) throw DomainError("tf_energy: Z must be positive");
  return energy_from(universal_solution(), z);
}

double tf_energy(double z) { return tf_energy_components(z).total; }

RadialDensity tf_density(double z, GridPtr grid) {
  if (!(z > 0.0)) throw DomainError("tf_density: Z must be positive");
  const TFSolution& sol = universal_solution();
  const double a = tf_length_constant() * std::cbrt(1.0 / z);
  const Vec xs = grid->r / a;
  const Vec y = sol.evaluate(xs).cwiseMax(0.0);
  const double pi = std::numbers::pi;
  // q = 4 pi r^2 rho = (4 / (3 pi)) r^2 (2 Z y / r)^{3/2}
  Vec q = (4.0 / (3.0 * pi)) * grid->r.array().square() *
          (2.0 * z * y.array() / grid->r.array()).pow(1.5);
  return {std::move(grid), q};
}

double coulomb_distance(const RadialDensity& rho_star, double z) {
  return coulomb_energy(rho_star - tf_density(z, rho_star.grid));
}

}  // namespace nopair
