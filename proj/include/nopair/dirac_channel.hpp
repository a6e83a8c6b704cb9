#pragma once

#include <memory>
#include <vector>

#include "nopair/grid.hpp"
#include "nopair/linalg.hpp"

namespace nopair {

// A central potential sampled on the nodes and on the half nodes.
struct RadialPotential {
  Vec node;
  Vec half;
};

RadialPotential zero_potential(const RadialGrid& grid);
RadialPotential coulomb_potential(const RadialGrid& grid, double charge);
// Half-node values by cubic interpolation of the node samples.
RadialPotential potential_from_samples(const RadialGrid& grid, const Vec& node_values);
RadialPotential operator+(const RadialPotential& a, const RadialPotential& b);
RadialPotential operator*(double s, const RadialPotential& a);

// Weighted radial kinetic block B ~ d/dr + kappa_j / r, mapping
// u = sqrt(r) f on the nodes to sqrt(r) g on the half nodes.
Mat kinetic_block(const RadialGrid& grid, int kappa_j);

// Radial Dirac operator of one angular channel,
//   H = [[c^2 + V, c B^T], [c B, -c^2 + V]],
// acting on (u, v) in block order: u on the nodes, v on the half nodes.
struct ChannelOperator {
  GridPtr grid;
  int kappa_j = -1;
  double c = 1.0;
  RadialPotential potential;
  std::shared_ptr<const Mat> b;

  int n() const { return grid->n; }
  int dim() const { return 2 * grid->n; }
  Mat matrix() const;
  // Same operator with f and g interleaved, bandwidth 3.
  BandMatrix band() const;
  Vec apply(const Vec& x) const;
  Mat apply(const Mat& x) const;
  double rayleigh(const Eigen::Ref<const Vec>& v) const;
};

ChannelOperator assemble_channel(GridPtr grid, int kappa_j, double c,
                                 const RadialPotential& potential,
                                 std::shared_ptr<const Mat> b = nullptr);
ChannelOperator assemble_channel(GridPtr grid, int kappa_j, double c,
                                 const Vec& node_potential);

enum class LevelClass { Sea, GapBound, Scattering };

struct ChannelSpectrum {
  ChannelOperator op;
  Vec values;    // ascending
  Mat vectors;   // columns in block order
  std::vector<LevelClass> cls;
  std::vector<int> gap;  // columns of retained gap-bound states, ascending
  int spurious_discarded = 0;
  bool complete = false;  // true when every eigenpair was computed

  int kappa_j() const { return op.kappa_j; }
  double c() const { return op.c; }
  int gap_count() const { return static_cast<int>(gap.size()); }
  double gap_value(int k) const { return values(gap.at(k)); }
  Vec gap_vector(int k) const { return vectors.col(gap.at(k)); }
};

// Full eigendecomposition.
ChannelSpectrum diagonalize(const ChannelOperator& op);
// Only the eigenpairs in the gap (0, c^2); at most max_levels are kept when
// max_levels > 0.
ChannelSpectrum diagonalize_gap(const ChannelOperator& op, int max_levels = 0);

// Sum of v v^T over eigenvectors with positive eigenvalue.
Mat positive_projector(const ChannelSpectrum& spec);

struct ResolventOptions {
  double tail_tolerance = 1e-10;
  double low_cut_ratio = 1e-5;  // z_low * ||H^{-1}|| target
};

// 1/2 + (1/2pi) int (H + iz)^{-1} dz evaluated with a log-trapezoid rule on
// [z_low, z_max], a first-order closure below z_low and a two-term tail
// above z_max.
Mat resolvent_projector(const Mat& h, double z_max, int n_quad,
                        const ResolventOptions& opt = {});
Mat resolvent_projector(const ChannelOperator& op, double z_max, int n_quad,
                        const ResolventOptions& opt = {});

// Smallest eigenvalue of b - a; a <= b holds when the result is >= -tol.
double operator_order(const Mat& a, const Mat& b);

// Free channel (V = 0) in closed form from the SVD B = U S W^T:
// H_0^2 = blockdiag(c^4 + c^2 B^T B, c^4 + c^2 B B^T).
class FreeChannel {
 public:
  FreeChannel(GridPtr grid, int kappa_j, double c,
              std::shared_ptr<const Mat> b = nullptr);

  int n() const { return n_; }
  int kappa_j() const { return kappa_j_; }
  double c() const { return c_; }
  const Vec& sigma() const { return s_; }

  // |D_0|^p as a dense 2n x 2n matrix.
  Mat abs_power(double p) const;
  // |D_0|^p X without forming the dense matrix.
  Mat apply_abs_power(double p, const Mat& x) const;
  // |p| = blockdiag(W S W^T, U S U^T) applied to X.
  Mat apply_abs_momentum(const Mat& x) const;
  // Orthonormal basis of the positive spectral subspace (2n x n).
  Mat positive_basis() const;
  // Positive free eigenvalues sqrt(c^4 + c^2 s^2), ascending.
  Vec positive_energies() const;
  // Node-side singular vectors of B with sigma < sigma_cut, padded to 2n
  // rows. For kappa_j > 0 the truncated grid carries one such mode pinned
  // at r_min (the discrete image of the irregular solution r^{-kappa_j}).
  Mat inner_null_modes(double sigma_cut) const;

 private:
  int n_;
  int kappa_j_;
  double c_;
  Mat w_;  // node side singular vectors
  Mat u_;  // half side singular vectors
  Vec s_;
};

}  // namespace nopair
