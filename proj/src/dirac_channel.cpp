#include "nopair/dirac_channel.hpp"

#include <cmath>
#include <string>

#include "nopair/errors.hpp"

namespace nopair {

namespace {

constexpr double kKineticBalanceFactor = 10.0;

void check_potential(const RadialGrid& grid, const RadialPotential& p) {
  if (p.node.size() != grid.n || p.half.size() != grid.n) {
    throw DomainError("channel potential does not match the grid");
  }
  if (!p.node.allFinite() || !p.half.allFinite()) {
    throw DomainError("channel potential has non-finite samples");
  }
}

// Interleaved position of block index k (f_i -> 2i, g_j -> 2j + 1).
int interleaved(int k, int n) { return k < n ? 2 * k : 2 * (k - n) + 1; }

Mat deinterleave(const Mat& z, int n) {
  Mat out(2 * n, z.cols());
  for (int k = 0; k < 2 * n; ++k) out.row(k) = z.row(interleaved(k, n));
  return out;
}

LevelClass classify(double lambda, double c2) {
  if (lambda < 0.0) return LevelClass::Sea;
  if (lambda < c2) return LevelClass::GapBound;
  return LevelClass::Scattering;
}

// Ratio of the computed lower component to the one predicted from the
// upper component by the second row of the eigenvalue equation with the
// potential dropped.
double kinetic_balance_ratio(const ChannelOperator& op, const Vec& x, double lambda) {
  const int n = op.n();
  const Vec pred = op.c * (*op.b) * x.head(n) / (lambda + op.c * op.c);
  const double pn = pred.norm();
  const double vn = x.tail(n).norm();
  if (pn == 0.0) return vn == 0.0 ? 1.0 : INFINITY;
  return vn / pn;
}

ChannelSpectrum finish(const ChannelOperator& op, EigenPairs e, bool complete,
                       int max_levels) {
  ChannelSpectrum s;
  s.op = op;
  s.complete = complete;
  // Full spectra come from the dense block-ordered matrix, partial ones
  // from the interleaved band.
  s.vectors = complete ? std::move(e.vectors) : deinterleave(e.vectors, op.n());
  s.values = e.values;
  const double c2 = op.c * op.c;
  s.cls.resize(s.values.size());
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    if (s.values(k) > 0.0 && s.values(k) < c2) {
      // Bisection-based solvers resolve eigenvalues only to eps ||H||;
      // the Rayleigh quotient of the returned vector is far sharper.
      s.values(k) = op.rayleigh(s.vectors.col(k));
    }
    s.cls[k] = classify(s.values(k), c2);
  }
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    if (s.cls[k] != LevelClass::GapBound) continue;
    const double ratio = kinetic_balance_ratio(op, s.vectors.col(k), s.values(k));
    if (ratio > kKineticBalanceFactor || ratio < 1.0 / kKineticBalanceFactor) {
      ++s.spurious_discarded;
      continue;
    }
    if (max_levels > 0 && static_cast<int>(s.gap.size()) >= max_levels) continue;
    s.gap.push_back(static_cast<int>(k));
  }
  return s;
}

}  // namespace

RadialPotential zero_potential(const RadialGrid& grid) {
  return {Vec::Zero(grid.n), Vec::Zero(grid.n)};
}

RadialPotential coulomb_potential(const RadialGrid& grid, double charge) {
  return {-charge * grid.r.cwiseInverse(), -charge * grid.r_half.cwiseInverse()};
}

RadialPotential potential_from_samples(const RadialGrid& grid, const Vec& node_values) {
  if (node_values.size() != grid.n) {
    throw DomainError("potential samples do not match the grid");
  }
  return {node_values, interp_node_to_half(node_values)};
}

RadialPotential operator+(const RadialPotential& a, const RadialPotential& b) {
  return {a.node + b.node, a.half + b.half};
}

RadialPotential operator*(double s, const RadialPotential& a) {
  return {s * a.node, s * a.half};
}

Mat kinetic_block(const RadialGrid& grid, int kappa_j) {
  const Vec sh = grid.r_half.array().rsqrt();
  const Vec sn = grid.r.array().rsqrt();
  const Vec m = grid.r_half.array().sqrt() * (kappa_j / grid.r_half.array());
  Mat k = sh.asDiagonal() * staggered_dx(grid.n, grid.h) * sn.asDiagonal();
  k += m.asDiagonal() * node_to_half_matrix(grid.n) * sn.asDiagonal();
  return k;
}

Mat ChannelOperator::matrix() const {
  const int m = n();
  const double c2 = c * c;
  Mat h = Mat::Zero(2 * m, 2 * m);
  h.topLeftCorner(m, m).diagonal() = potential.node.array() + c2;
  h.bottomRightCorner(m, m).diagonal() = potential.half.array() - c2;
  h.bottomLeftCorner(m, m) = c * (*b);
  h.topRightCorner(m, m) = c * b->transpose();
  return h;
}

BandMatrix ChannelOperator::band() const {
  const int m = n();
  const double c2 = c * c;
  BandMatrix a(2 * m, 3);
  for (int i = 0; i < m; ++i) {
    a.at(2 * i, 2 * i) = c2 + potential.node(i);
    a.at(2 * i + 1, 2 * i + 1) = -c2 + potential.half(i);
  }
  for (int j = 0; j < m; ++j) {
    for (int i = std::max(0, j - 1); i <= std::min(m - 1, j + 2); ++i) {
      const int p = 2 * j + 1;
      const int q = 2 * i;
      const double val = c * (*b)(j, i);
      if (p >= q) {
        a.at(p, q) = val;
      } else {
        a.at(q, p) = val;
      }
    }
  }
  return a;
}

Vec ChannelOperator::apply(const Vec& x) const {
  const int m = n();
  const double c2 = c * c;
  Vec y(2 * m);
  y.head(m) = (potential.node.array() + c2) * x.head(m).array();
  y.head(m) += c * b->transpose() * x.tail(m);
  y.tail(m) = (potential.half.array() - c2) * x.tail(m).array();
  y.tail(m) += c * (*b) * x.head(m);
  return y;
}

Mat ChannelOperator::apply(const Mat& x) const {
  const int m = n();
  const double c2 = c * c;
  Mat y(2 * m, x.cols());
  y.topRows(m) = (potential.node.array() + c2).matrix().asDiagonal() * x.topRows(m);
  y.topRows(m) += c * b->transpose() * x.bottomRows(m);
  y.bottomRows(m) = (potential.half.array() - c2).matrix().asDiagonal() * x.bottomRows(m);
  y.bottomRows(m) += c * (*b) * x.topRows(m);
  return y;
}

double ChannelOperator::rayleigh(const Eigen::Ref<const Vec>& v) const {
  const int m = n();
  const double c2 = c * c;
  const auto u = v.head(m);
  const auto w = v.tail(m);
  const double diag = ((potential.node.array() + c2) * u.array().square()).sum() +
                      ((potential.half.array() - c2) * w.array().square()).sum();
  const double off = 2.0 * c * w.dot((*b) * u);
  return (diag + off) / v.squaredNorm();
}

ChannelOperator assemble_channel(GridPtr grid, int kappa_j, double c,
                                 const RadialPotential& potential,
                                 std::shared_ptr<const Mat> b) {
  if (kappa_j == 0) throw DomainError("assemble_channel: kappa_j must be nonzero");
  if (!(c > 0.0)) throw DomainError("assemble_channel: c must be positive");
  check_potential(*grid, potential);
  ChannelOperator op;
  op.grid = std::move(grid);
  op.kappa_j = kappa_j;
  op.c = c;
  op.potential = potential;
  op.b = b ? std::move(b) : std::make_shared<const Mat>(kinetic_block(*op.grid, kappa_j));
  return op;
}

ChannelOperator assemble_channel(GridPtr grid, int kappa_j, double c,
                                 const Vec& node_potential) {
  if (!node_potential.allFinite()) {
    throw DomainError("assemble_channel: potential has non-finite samples");
  }
  RadialPotential p = potential_from_samples(*grid, node_potential);
  return assemble_channel(std::move(grid), kappa_j, c, p);
}

ChannelSpectrum diagonalize(const ChannelOperator& op) {
  // Reference LAPACK's dense divide and conquer beats the banded one here.
  return finish(op, sym_eig(op.matrix()), true, 0);
}

ChannelSpectrum diagonalize_gap(const ChannelOperator& op, int max_levels) {
  return finish(op, band_eig_range(op.band(), 0.0, op.c * op.c), false, max_levels);
}

Mat positive_projector(const ChannelSpectrum& spec) {
  if (!spec.complete) {
    throw DomainError("positive_projector: needs the full spectrum");
  }
  const double guard = 1e-10 * spec.c() * spec.c();
  int first = -1;
  for (Eigen::Index k = 0; k < spec.values.size(); ++k) {
    if (std::abs(spec.values(k)) < guard) {
      throw NumericError("positive_projector: eigenvalue " +
                         std::to_string(spec.values(k)) +
                         " too close to zero for a well-conditioned projection");
    }
    if (first < 0 && spec.values(k) > 0.0) first = static_cast<int>(k);
  }
  const Eigen::Index dim = spec.vectors.rows();
  if (first < 0) return Mat::Zero(dim, dim);
  const Mat vp = spec.vectors.rightCols(spec.values.size() - first);
  return vp * vp.transpose();
}

Mat resolvent_projector(const Mat& h, double z_max, int n_quad,
                        const ResolventOptions& opt) {
  if (h.rows() != h.cols()) throw DomainError("resolvent_projector: not square");
  if (!(z_max > 0.0) || n_quad < 2) {
    throw DomainError("resolvent_projector: need z_max > 0 and n_quad >= 2");
  }
  const Eigen::Index dim = h.rows();
  const Mat id = Mat::Identity(dim, dim);
  const double hnorm = h.norm();  // Frobenius, bounds the spectral norm
  const double tail_err = std::pow(hnorm / z_max, 5) / (5.0 * M_PI);
  if (tail_err > opt.tail_tolerance) {
    throw AccuracyError("resolvent_projector: z_max too small, tail estimate " +
                        std::to_string(tail_err));
  }
  Eigen::PartialPivLU<Mat> lu(h);
  const Mat hinv = lu.inverse();
  const double hinv_norm = hinv.norm();
  if (!std::isfinite(hinv_norm)) {
    throw NumericError("resolvent_projector: operator is singular");
  }
  const double z_low = opt.low_cut_ratio / hinv_norm;
  if (!(z_low < z_max)) throw DomainError("resolvent_projector: z_max below the gap");

  // int_0^inf H (H^2 + z^2)^{-1} dz = (pi / 2) sign(H)
  const Mat h2 = h * h;
  const double u0 = std::log(z_low);
  const double du = (std::log(z_max) - u0) / (n_quad - 1);
  Mat integral = Mat::Zero(dim, dim);
  for (int k = 0; k < n_quad; ++k) {
    const double z = std::exp(u0 + k * du);
    const double wt = (k == 0 || k == n_quad - 1) ? 0.5 : 1.0;
    Eigen::LLT<Mat> llt(h2 + z * z * id);
    if (llt.info() != Eigen::Success) {
      throw NumericError("resolvent_projector: shifted square not positive");
    }
    integral += (wt * du * z) * llt.solve(h);
  }
  integral += z_low * hinv - std::pow(z_low, 3) / 3.0 * hinv * hinv * hinv;
  integral += h / z_max - h2 * h / (3.0 * std::pow(z_max, 3));
  Mat p = 0.5 * id + integral / M_PI;
  return 0.5 * (p + p.transpose());
}

Mat resolvent_projector(const ChannelOperator& op, double z_max, int n_quad,
                        const ResolventOptions& opt) {
  return resolvent_projector(op.matrix(), z_max, n_quad, opt);
}

double operator_order(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw DomainError("operator_order: dimension mismatch");
  }
  const Mat d = b - a;
  return sym_eigvals(0.5 * (d + d.transpose()))(0);
}

FreeChannel::FreeChannel(GridPtr grid, int kappa_j, double c,
                         std::shared_ptr<const Mat> b)
    : n_(grid->n), kappa_j_(kappa_j), c_(c) {
  if (!b) b = std::make_shared<const Mat>(kinetic_block(*grid, kappa_j));
  Svd d = svd(*b);
  // B = U S W^T with U on the half nodes and W on the nodes
  u_ = std::move(d.u);
  w_ = std::move(d.v);
  s_ = std::move(d.s);
}

Mat FreeChannel::abs_power(double p) const {
  const Vec f = ((c_ * c_ * c_ * c_) + (c_ * c_) * s_.array().square()).pow(p / 2.0);
  Mat out = Mat::Zero(2 * n_, 2 * n_);
  out.topLeftCorner(n_, n_) = w_ * f.asDiagonal() * w_.transpose();
  out.bottomRightCorner(n_, n_) = u_ * f.asDiagonal() * u_.transpose();
  return out;
}

Mat FreeChannel::apply_abs_power(double p, const Mat& x) const {
  const Vec f = ((c_ * c_ * c_ * c_) + (c_ * c_) * s_.array().square()).pow(p / 2.0);
  Mat y(2 * n_, x.cols());
  y.topRows(n_) = w_ * (f.asDiagonal() * (w_.transpose() * x.topRows(n_)));
  y.bottomRows(n_) = u_ * (f.asDiagonal() * (u_.transpose() * x.bottomRows(n_)));
  return y;
}

Mat FreeChannel::apply_abs_momentum(const Mat& x) const {
  Mat y(2 * n_, x.cols());
  y.topRows(n_) = w_ * (s_.asDiagonal() * (w_.transpose() * x.topRows(n_)));
  y.bottomRows(n_) = u_ * (s_.asDiagonal() * (u_.transpose() * x.bottomRows(n_)));
  return y;
}

Mat FreeChannel::inner_null_modes(double sigma_cut) const {
  std::vector<int> keep;
  for (int k = 0; k < n_; ++k) {
    if (s_(k) < sigma_cut) keep.push_back(k);
  }
  Mat out = Mat::Zero(2 * n_, static_cast<Eigen::Index>(keep.size()));
  for (size_t j = 0; j < keep.size(); ++j) out.col(j).head(n_) = w_.col(keep[j]);
  return out;
}

Mat FreeChannel::positive_basis() const {
  // Each singular triple spans a 2x2 block [[c^2, c s], [c s, -c^2]] whose
  // positive eigenvector is (c^2 + E, c s) / norm with E = sqrt(c^4 + c^2 s^2).
  const double c2 = c_ * c_;
  Mat y(2 * n_, n_);
  for (int k = 0; k < n_; ++k) {
    const double e = std::sqrt(c2 * c2 + c2 * s_(k) * s_(k));
    const double a = c2 + e;
    const double bb = c_ * s_(k);
    const double nrm = std::hypot(a, bb);
    y.col(k).head(n_) = w_.col(k) * (a / nrm);
    y.col(k).tail(n_) = u_.col(k) * (bb / nrm);
  }
  return y;
}

Vec FreeChannel::positive_energies() const {
  Vec e = ((c_ * c_ * c_ * c_) + (c_ * c_) * s_.array().square()).sqrt();
  return e.reverse();
}

}  // namespace nopair
