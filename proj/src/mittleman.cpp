#include "nopair/mittleman.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include "nopair/errors.hpp"

namespace nopair {

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Occupied columns of gamma_* in the full eigenbasis of D_*.
struct StarChannel {
  int kappa_j = 0;
  ChannelSpectrum full;
  Mat v;
  Vec w;
  Vec lambda;
};

std::vector<StarChannel> star_channels(const ScfState& state) {
  std::map<int, std::vector<std::pair<int, double>>> by_channel;
  for (const auto& e : state.occ.entries) {
    if (e.nu > 0.0) by_channel[e.kappa_j].push_back({e.level, e.nu});
  }
  std::vector<StarChannel> out;
  for (const auto& [kj, list] : by_channel) {
    StarChannel ch;
    ch.kappa_j = kj;
    ch.full = diagonalize(state.spectra.at(kj).op);
    const int m = static_cast<int>(list.size());
    ch.v.resize(ch.full.op.dim(), m);
    ch.w.resize(m);
    ch.lambda.resize(m);
    for (int k = 0; k < m; ++k) {
      if (list[k].first >= ch.full.gap_count()) {
        throw NumericError("occupied level missing from the full spectrum");
      }
      ch.v.col(k) = ch.full.gap_vector(list[k].first);
      ch.lambda(k) = ch.full.gap_value(list[k].first);
      ch.w(k) = list[k].second / (2.0 * std::abs(kj));
    }
    out.push_back(std::move(ch));
  }
  return out;
}

Mat apply_potential(const RadialPotential& p, const Mat& x) {
  const Eigen::Index n = p.node.size();
  Mat y(x.rows(), x.cols());
  y.topRows(n) = p.node.asDiagonal() * x.topRows(n);
  y.bottomRows(n) = p.half.asDiagonal() * x.bottomRows(n);
  return y;
}

Mat positive_part(const ChannelSpectrum& s) {
  Eigen::Index first = 0;
  while (first < s.values.size() && s.values(first) <= 0.0) ++first;
  return s.vectors.rightCols(s.values.size() - first);
}

Mat negative_part(const ChannelSpectrum& s) {
  Eigen::Index count = 0;
  while (count < s.values.size() && s.values(count) <= 0.0) ++count;
  return s.vectors.leftCols(count);
}

ChannelOperator channel_with(const ScfState& state, int kj, const RadialPotential& v) {
  return assemble_channel(state.grid(), kj, state.c(), v, state.basis->block(kj));
}

// Orthonormal basis of the orthogonal complement of the columns of x.
Mat complement_of(const Mat& x) {
  const Eigen::Index dim = x.rows();
  if (x.cols() == 0) return Mat::Identity(dim, dim);
  Eigen::HouseholderQR<Mat> qr(x);
  const Mat q = qr.householderQ() * Mat::Identity(dim, dim);
  return q.rightCols(dim - x.cols());
}

double slack_of(const ChannelSpectrum& picture, const ChannelOperator& bare) {
  const Mat yn = negative_part(picture);
  if (yn.cols() == 0) return bare.c * bare.c;
  Mat m = yn.transpose() * bare.apply(yn);
  m = 0.5 * (m + m.transpose());
  return bare.c * bare.c - sym_eigvals(m).maxCoeff();
}

using SpectrumCache = std::map<int, ChannelSpectrum>;

const ChannelSpectrum& picture_spectrum(const ScfState& state, const RadialPotential& v, int kj,
                                        SpectrumCache& cache) {
  auto it = cache.find(kj);
  if (it == cache.end()) it = cache.emplace(kj, diagonalize(channel_with(state, kj, v))).first;
  return it->second;
}

}  // namespace

PictureSpec PictureSpec::furry() { return {}; }

PictureSpec PictureSpec::free() {
  PictureSpec s;
  s.kind = PictureKind::Free;
  return s;
}

PictureSpec PictureSpec::coulomb_prime(double kappa_prime) {
  if (!(kappa_prime > -1.0 && kappa_prime < 1.0)) {
    throw DomainError("coulomb picture: kappa' must lie in (-1, 1)");
  }
  PictureSpec s;
  s.kind = PictureKind::CoulombPrime;
  s.kappa_prime = kappa_prime;
  return s;
}

PictureSpec PictureSpec::mean_field(double scale) {
  PictureSpec s;
  s.kind = PictureKind::MeanField;
  s.scale = scale;
  return s;
}

PictureSpec PictureSpec::custom(const Vec& samples) {
  if (!samples.allFinite()) throw DomainError("custom picture: samples must be finite");
  PictureSpec s;
  s.kind = PictureKind::Custom;
  s.samples = samples;
  return s;
}

PictureSpec PictureSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto number = [&](const std::string& what) {
    try {
      size_t used = 0;
      const double v = std::stod(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("picture '" + text + "': " + what + " must be a number");
    }
  };
  if (head == "furry" && arg.empty()) return furry();
  if (head == "free" && arg.empty()) return free();
  if (head == "coulomb") return coulomb_prime(number("kappa'"));
  if (head == "meanfield") return arg.empty() ? mean_field() : mean_field(number("scale"));
  throw ConfigError("unknown picture '" + text + "'");
}

std::string PictureSpec::name() const {
  switch (kind) {
    case PictureKind::Furry:
      return "furry";
    case PictureKind::Free:
      return "free";
    case PictureKind::CoulombPrime:
      return "coulomb:" + format_number(kappa_prime);
    case PictureKind::MeanField:
      return "meanfield:" + format_number(scale);
    case PictureKind::Custom:
      return "custom";
  }
  return "unknown";
}

RadialPotential picture_potential(const PictureSpec& spec, const ScfState& state) {
  const RadialGrid& grid = *state.grid();
  switch (spec.kind) {
    case PictureKind::Furry:
      return zero_potential(grid);
    case PictureKind::Free:
      return coulomb_potential(grid, -state.cfg.z);
    case PictureKind::CoulombPrime:
      return coulomb_potential(grid, -(state.cfg.z - spec.kappa_prime * state.c()));
    case PictureKind::MeanField:
      return spec.scale * potential_from_samples(grid, state.phi);
    case PictureKind::Custom:
      return potential_from_samples(grid, spec.samples);
  }
  return zero_potential(grid);
}

std::vector<ChannelOperator> picture_operator(const PictureSpec& spec, const ScfState& state) {
  if (spec.kind == PictureKind::CoulombPrime) {
    for (int kj : state.basis->kappas()) {
      if (spec.kappa_prime * spec.kappa_prime >= static_cast<double>(kj) * kj) {
        throw DomainError("picture coupling is supercritical in channel " + std::to_string(kj));
      }
    }
  }
  const RadialPotential v =
      coulomb_potential(*state.grid(), state.cfg.z) + picture_potential(spec, state);
  std::vector<ChannelOperator> out;
  for (int kj : state.basis->kappas()) out.push_back(channel_with(state, kj, v));
  return out;
}

Mat first_order_response(const Vec& lambda, const Mat& a) {
  const Eigen::Index n = lambda.size();
  if (a.rows() != n || a.cols() != n) throw DomainError("first_order_response: size mismatch");
  Mat q = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if ((lambda(i) > 0.0) == (lambda(j) > 0.0)) continue;
      const double gap = std::abs(lambda(i) - lambda(j));
      if (gap == 0.0) throw NumericError("first_order_response: degenerate opposite-sign pair");
      q(i, j) = a(i, j) / gap;
    }
  }
  return q;
}

namespace {

struct PictureWork {
  Decomposition dec;
  ProjectedState projected;
};

PictureWork run_picture(const ScfState& state, const PictureSpec& spec,
                        const std::vector<StarChannel>& stars, SpectrumCache& pics) {
  const GridPtr& grid = state.grid();
  const double c = state.c();
  const double c2 = c * c;
  const RadialPotential bare = coulomb_potential(*grid, state.cfg.z);
  const RadialPotential a = picture_potential(spec, state);
  const RadialPotential phi_star = potential_from_samples(*grid, state.phi);
  const RadialPotential a_star = a + (-1.0) * phi_star;
  // Unscaled Hartree potential of rho_* for the Fermi-Amaldi remainder.
  const double s = state.cfg.fermi_amaldi();
  const RadialPotential hartree_star =
      potential_from_samples(*grid, hartree_potential(state.rho));

  PictureWork out;
  Decomposition& d = out.dec;
  ProjectedState& p = out.projected;
  p.gamma_a.basis = state.basis;
  p.gamma_a.z = state.cfg.z;
  p.gamma_a.c = c;
  p.gamma_a.n_electrons = state.cfg.electrons();
  GeneralState gamma_star = p.gamma_a;

  double kc_star = 0.0;
  double fa = 0.0;
  for (const StarChannel& ch : stars) {
    const double mult = 2.0 * std::abs(ch.kappa_j);
    const ChannelOperator& dstar = ch.full.op;
    const ChannelOperator d0 = channel_with(state, ch.kappa_j, bare);
    const ChannelSpectrum& pic = picture_spectrum(state, bare + a, ch.kappa_j, pics);
    const Mat yp = positive_part(pic);
    const Mat pv = yp * (yp.transpose() * ch.v);
    const Mat qv = pv - ch.v;

    // First-order part from the negative eigenvectors of D_*.
    const Mat en = negative_part(ch.full);
    const Vec ln = ch.full.values.head(en.cols());
    Mat coef = en.transpose() * apply_potential(a_star, ch.v);
    for (Eigen::Index i = 0; i < coef.rows(); ++i) {
      for (Eigen::Index k = 0; k < coef.cols(); ++k) coef(i, k) /= ch.lambda(k) - ln(i);
    }
    const Mat qphi_v = en * coef;
    const Mat rv = qv - qphi_v;

    const Mat ystar = positive_part(ch.full);
    const Mat pstar_v = ystar * (ystar.transpose() * ch.v);
    d.bookkeeping = std::max(d.bookkeeping, ((pv - pstar_v) - qphi_v - rv).norm());

    const Mat hv = dstar.apply(ch.v) - c2 * ch.v;
    const Mat hqv = dstar.apply(qv) - c2 * qv;
    const Mat d0v = d0.apply(ch.v);
    const Mat d0pv = d0.apply(pv);
    for (Eigen::Index k = 0; k < ch.v.cols(); ++k) {
      const double w = mult * ch.w(k);
      d.cross_check += w * 2.0 * hv.col(k).dot(qphi_v.col(k));
      d.ii_r += w * 2.0 * hv.col(k).dot(rv.col(k));
      d.ii_qq += w * qv.col(k).dot(hqv.col(k));
      kc_star += w * (ch.v.col(k).dot(d0v.col(k)) - c2 * ch.v.col(k).squaredNorm());
      p.kinetic_coulomb += w * (pv.col(k).dot(d0pv.col(k)) - c2 * pv.col(k).squaredNorm());
      p.trace += w * pv.col(k).squaredNorm();
      const double hp = (pv.col(k).transpose() * apply_potential(hartree_star, pv.col(k)))(0, 0);
      const double hs = (ch.v.col(k).transpose() * apply_potential(hartree_star, ch.v.col(k)))(0, 0);
      fa += w * (hp - hs);
    }
    p.gamma_a.channels.push_back({ch.kappa_j, pv, ch.w});
    gamma_star.channels.push_back({ch.kappa_j, ch.v, ch.w});
  }
  const RadialDensity rho_a = p.gamma_a.density();
  const RadialDensity rho_s = gamma_star.density();
  p.hartree = coulomb_energy(rho_a);
  p.e_h = p.kinetic_coulomb + p.hartree;

  d.e_h_star = kc_star + coulomb_energy(rho_s);
  d.e_h_gamma_a = p.e_h;
  d.term_i = d.e_h_star + d.cross_check;
  d.term_ii = d.ii_r + d.ii_qq;
  d.term_iii = coulomb_energy(rho_a - rho_s);
  d.fermi_amaldi_term = (1.0 - s) * fa;
  d.identity_residual =
      std::abs(d.e_h_gamma_a - (d.term_i + d.term_ii + d.term_iii + d.fermi_amaldi_term));
  d.cross_check = std::abs(d.cross_check);
  return out;
}

Admissibility admissibility_from(const PictureSpec& spec, const ScfState& state,
                                 const std::vector<StarChannel>& stars, SpectrumCache& pics,
                                 bool operator_norms) {
  Admissibility adm;
  adm.operator_norms = operator_norms;
  const GridPtr& grid = state.grid();
  const double c = state.c();
  const RadialPotential bare = coulomb_potential(*grid, state.cfg.z);
  const RadialPotential a = picture_potential(spec, state);
  const bool zero_a = a.node.cwiseAbs().maxCoeff() == 0.0 && a.half.cwiseAbs().maxCoeff() == 0.0;

  std::map<int, const StarChannel*> occupied;
  for (const auto& ch : stars) occupied[ch.kappa_j] = &ch;

  adm.boundedness_slack = INFINITY;
  adm.ope_lower = INFINITY;
  adm.ope_upper = 0.0;
  for (int kj : state.basis->kappas()) {
    const ChannelOperator d0 = channel_with(state, kj, bare);
    const ChannelSpectrum& pic = picture_spectrum(state, bare + a, kj, pics);
    adm.boundedness_slack = std::min(adm.boundedness_slack, slack_of(pic, d0));

    const FreeChannel& free = state.basis->free(kj, c);
    auto it = occupied.find(kj);
    if (it != occupied.end() && !zero_a) {
      const StarChannel& ch = *it->second;
      const Mat av = apply_potential(a, ch.v);
      const Mat dav = free.apply_abs_power(-1.0, av);
      for (Eigen::Index k = 0; k < ch.v.cols(); ++k) {
        adm.trace_condition += 2.0 * std::abs(kj) * ch.w(k) * av.col(k).dot(dav.col(k));
      }
    }
    if (operator_norms) {
      // Both norms are taken on the complement of the inner-boundary null
      // modes of B, which have no continuum counterpart.
      const Mat nulls = free.inner_null_modes(1e-2 / grid->r_max());
      const Mat f = complement_of(nulls).transpose() * free.abs_power(-0.5);
      if (!zero_a) {
        Vec diag(2 * grid->n);
        diag << a.node, a.half;
        Mat m = f * diag.asDiagonal() * f.transpose();
        m = 0.5 * (m + m.transpose());
        adm.birman_norm = std::max(adm.birman_norm, sym_eigvals(m).cwiseAbs().maxCoeff());
      }
      const Mat abs_pic = pic.vectors * pic.values.cwiseAbs().asDiagonal() * pic.vectors.transpose();
      Mat m = f * abs_pic * f.transpose();
      m = 0.5 * (m + m.transpose());
      const Vec ev = sym_eigvals(m);
      adm.ope_lower = std::min(adm.ope_lower, ev.minCoeff());
      adm.ope_upper = std::max(adm.ope_upper, ev.maxCoeff());
    }
  }
  if (!operator_norms) adm.ope_lower = adm.ope_upper = 0.0;
  return adm;
}

}  // namespace

ProjectedState project_state(const ScfState& state, const PictureSpec& spec) {
  SpectrumCache pics;
  return run_picture(state, spec, star_channels(state), pics).projected;
}

Decomposition decompose(const ScfState& state, const PictureSpec& spec) {
  SpectrumCache pics;
  return run_picture(state, spec, star_channels(state), pics).dec;
}

Admissibility admissibility_diagnostics(const PictureSpec& spec, const ScfState& state,
                                        bool operator_norms) {
  SpectrumCache pics;
  return admissibility_from(spec, state, star_channels(state), pics, operator_norms);
}

double trace_condition(const PictureSpec& spec, const ScfState& state) {
  const RadialPotential a = picture_potential(spec, state);
  std::map<int, std::vector<std::pair<int, double>>> by_channel;
  for (const auto& e : state.occ.entries) {
    if (e.nu > 0.0) by_channel[e.kappa_j].push_back({e.level, e.nu});
  }
  double total = 0.0;
  for (const auto& [kj, list] : by_channel) {
    const ChannelSpectrum& s = state.spectra.at(kj);
    Mat v(s.op.dim(), static_cast<Eigen::Index>(list.size()));
    for (size_t k = 0; k < list.size(); ++k) v.col(k) = s.gap_vector(list[k].first);
    const Mat av = apply_potential(a, v);
    const Mat dav = state.basis->free(kj, state.c()).apply_abs_power(-1.0, av);
    for (size_t k = 0; k < list.size(); ++k) total += list[k].second * av.col(k).dot(dav.col(k));
  }
  return total;
}

double no_pair_boundedness(const ScfState& state) {
  const RadialPotential bare = coulomb_potential(*state.grid(), state.cfg.z);
  double slack = INFINITY;
  for (int kj : state.basis->kappas()) {
    const ChannelOperator d0 = channel_with(state, kj, bare);
    slack = std::min(slack, slack_of(diagonalize(channel_with(state, kj, state.spectra.at(kj).op.potential)), d0));
  }
  return slack;
}

PictureReport analyze_picture(const ScfState& state, const PictureSpec& spec,
                              bool operator_norms) {
  return analyze_pictures(state, {spec}, operator_norms).front();
}

std::vector<PictureReport> analyze_pictures(const ScfState& state,
                                            const std::vector<PictureSpec>& specs,
                                            bool operator_norms) {
  const std::vector<StarChannel> stars = star_channels(state);
  std::vector<PictureReport> out;
  for (const PictureSpec& spec : specs) {
    SpectrumCache pics;
    PictureReport r;
    r.spec = spec;
    r.dec = run_picture(state, spec, stars, pics).dec;
    r.adm = admissibility_from(spec, state, stars, pics, operator_norms);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace nopair
