#include <cmath>
#include <map>
#include <string>

#include "nopair/errors.hpp"
#include "nopair/sere_scf.hpp"

namespace nopair {

namespace {

ScfConfig config_of(const GeneralState& g) {
  ScfConfig cfg;
  cfg.z = g.z;
  cfg.kappa = g.z / g.c;
  cfg.n_electrons = g.n_electrons;
  return cfg;
}

const ChannelMatrix* find_channel(const GeneralState& g, int kappa_j) {
  for (const auto& ch : g.channels) {
    if (ch.kappa_j == kappa_j) return &ch;
  }
  return nullptr;
}

}  // namespace

RadialDensity GeneralState::density() const {
  const GridPtr& grid = basis->grid();
  RadialDensity out = RadialDensity::zero(grid);
  for (const auto& ch : channels) {
    const double mult = 2.0 * std::abs(ch.kappa_j);
    for (Eigen::Index k = 0; k < ch.v.cols(); ++k) {
      if (ch.w(k) == 0.0) continue;
      out.q += mult * ch.w(k) * orbital_charge(*grid, ch.v.col(k));
    }
  }
  return out;
}

double GeneralState::trace() const {
  double t = 0.0;
  for (const auto& ch : channels) {
    t += 2.0 * std::abs(ch.kappa_j) * (ch.w.array() * ch.v.colwise().squaredNorm().transpose().array()).sum();
  }
  return t;
}

GeneralState general_state(const SpectrumSet& spectra, const OccupationTable& occ,
                           const ScfConfig& cfg, std::shared_ptr<const ChannelBasis> basis) {
  GeneralState g;
  g.basis = std::move(basis);
  g.z = cfg.z;
  g.c = cfg.c();
  g.n_electrons = cfg.electrons();
  std::map<int, std::vector<std::pair<int, double>>> by_channel;
  for (const auto& e : occ.entries) {
    if (e.nu > 0.0) by_channel[e.kappa_j].push_back({e.level, e.nu});
  }
  for (const auto& [kj, list] : by_channel) {
    const ChannelSpectrum& s = spectra.at(kj);
    ChannelMatrix ch;
    ch.kappa_j = kj;
    ch.v.resize(2 * g.basis->grid()->n, static_cast<Eigen::Index>(list.size()));
    ch.w.resize(static_cast<Eigen::Index>(list.size()));
    for (size_t k = 0; k < list.size(); ++k) {
      ch.v.col(k) = s.gap_vector(list[k].first);
      ch.w(k) = list[k].second / (2.0 * std::abs(kj));
    }
    g.channels.push_back(std::move(ch));
  }
  return g;
}

GeneralState general_state(const ScfState& s) {
  return general_state(s.spectra, s.occ, s.cfg, s.basis);
}

double xc_norm(const GeneralState& g) {
  double total = 0.0;
  for (const auto& ch : g.channels) {
    const FreeChannel& free = g.basis->free(ch.kappa_j, g.c);
    const Mat dv = free.apply_abs_power(1.0, ch.v);
    double s = 0.0;
    for (Eigen::Index k = 0; k < ch.v.cols(); ++k) s += ch.w(k) * ch.v.col(k).dot(dv.col(k));
    total += 2.0 * std::abs(ch.kappa_j) * s;
  }
  return total;
}

double xc_distance(const GeneralState& a, const GeneralState& b) {
  std::map<int, int> kappas;
  for (const auto& ch : a.channels) kappas[ch.kappa_j] = 1;
  for (const auto& ch : b.channels) kappas[ch.kappa_j] = 1;
  double total = 0.0;
  for (const auto& [kj, unused] : kappas) {
    (void)unused;
    const ChannelMatrix* ca = find_channel(a, kj);
    const ChannelMatrix* cb = find_channel(b, kj);
    const Eigen::Index na = ca ? ca->v.cols() : 0;
    const Eigen::Index nb = cb ? cb->v.cols() : 0;
    if (na + nb == 0) continue;
    const Eigen::Index dim = ca ? ca->v.rows() : cb->v.rows();
    Mat x(dim, na + nb);
    Vec w(na + nb);
    if (ca) {
      x.leftCols(na) = ca->v;
      w.head(na) = ca->w;
    }
    if (cb) {
      x.rightCols(nb) = cb->v;
      w.tail(nb) = -cb->w;
    }
    const FreeChannel& free = a.basis->free(kj, a.c);
    const Mat y = free.apply_abs_power(0.5, x);
    total += 2.0 * std::abs(kj) * trace_norm_factored(y, w.asDiagonal().toDenseMatrix());
  }
  return total;
}

RetractionResult retraction_step(const GeneralState& g) {
  const ScfConfig cfg = config_of(g);
  const MeanField mf = mean_field_operator(g.density(), cfg, *g.basis);
  RetractionResult out;
  out.state = g;
  for (auto& ch : out.state.channels) {
    const ChannelOperator* op = nullptr;
    for (const auto& candidate : mf.channels) {
      if (candidate.kappa_j == ch.kappa_j) op = &candidate;
    }
    if (!op) throw DomainError("retraction_step: channel outside the basis");
    const ChannelSpectrum spec = diagonalize(*op);
    Eigen::Index first = 0;
    while (first < spec.values.size() && spec.values(first) <= 0.0) ++first;
    const Mat yp = spec.vectors.rightCols(spec.values.size() - first);
    ch.v = yp * (yp.transpose() * ch.v);
  }
  out.defect = xc_distance(out.state, g);
  return out;
}

ThetaResult theta(const GeneralState& g, double tol, int max_n) {
  ThetaResult res;
  res.state = g;
  for (int n = 0; n < max_n; ++n) {
    RetractionResult step = retraction_step(res.state);
    res.defects.push_back(step.defect);
    if (n == 0 && step.defect < tol) return res;
    if (n > 0) {
      const double ratio = step.defect / res.defects[n - 1];
      res.ratios.push_back(ratio);
      res.contraction = std::max(res.contraction, ratio);
      if (n <= 3 && ratio >= 1.0) {
        std::string log;
        for (double r : res.ratios) log += " " + std::to_string(r);
        throw ConvergenceError("theta: retraction is not contracting, ratios" + log);
      }
    }
    res.state = std::move(step.state);
    res.iterations = n + 1;
    const double l = res.contraction;
    res.tail_bound = (l > 0.0 && l < 1.0) ? step.defect * l / (1.0 - l) : step.defect;
    if (step.defect < tol) return res;
  }
  throw ConvergenceError("theta: no convergence within " + std::to_string(max_n) + " steps");
}

EulerResidual euler_check(const ScfState& s) {
  EulerResidual r;
  const GeneralState g = general_state(s);
  r.retraction_defect = retraction_step(g).defect;
  r.xc_norm = xc_norm(g);
  const double c2 = s.c() * s.c();
  const double tol = s.cfg.aufbau_tol * c2;
  std::vector<std::pair<double, double>> occupied;   // (lambda, nu)
  std::vector<double> open;                          // levels with room left
  for (const auto& [kj, spec] : s.spectra) {
    for (int k = 0; k < spec.gap_count(); ++k) {
      const double nu = s.occ.get(kj, k);
      const double lam = spec.gap_value(k);
      if (nu > 0.0) occupied.push_back({lam, nu});
      if (nu < 2.0 * std::abs(kj)) open.push_back(lam);
    }
  }
  for (const auto& [lam, nu] : occupied) {
    (void)nu;
    for (double other : open) {
      if (lam > other + tol) ++r.aufbau_violations;
    }
  }
  r.mu = s.mu;
  r.mu_lower = c2 * std::sqrt(1.0 - s.cfg.kappa * s.cfg.kappa);
  r.mu_upper = c2;
  r.mu_in_band = r.mu > r.mu_lower && r.mu < r.mu_upper;
  r.trace_defect = std::abs(s.occ.total() - s.cfg.electrons());
  return r;
}

}  // namespace nopair
