#pragma once

#include <span>
#include <vector>

#include "plab/linalg.hpp"

namespace plab {

/// r-cone around a unit axis: w belongs iff (v|w) >= (1-r)|v||w|. Lives in
/// the ambient space or in an exterior-power space, so the dimension is not
/// capped at kMaxAmbientDim.
struct Cone {
  std::vector<double> axis;  // unit length
  double aperture = 0.0;     // r in (0,1)

  /// Normalizes the axis. Throws ValidationError for a zero axis or an
  /// aperture outside (0,1).
  static Cone around(std::vector<double> axis, double aperture);

  int dim() const noexcept { return static_cast<int>(axis.size()); }
};

/// Membership with 1e-14 slack on the normalized inequality. The zero
/// vector counts as contained (boundary convention).
bool cone_contains(const Cone& c, std::span<const double> w);

/// Sampled cone-mapping certificate. `margin` is the minimum slack of the
/// target inequality |(v2|Aw/|Aw|)| - (1 - r2) over the sampled boundary
/// directions of the source cone plus its axis; nonnegative margin (within
/// 1e-14) means every sample landed in K2 or -K2. Sampling is deterministic
/// (Kronecker sequence), so certificates are reproducible but not proofs.
struct ConeMapCertificate {
  bool holds = false;
  double margin = 0.0;
  int samples = 0;
};

/// Tests A * C(K) into C(K2) union -C(K2) on `samples` quasi-uniform
/// boundary directions plus the axis. Requires samples >= 1000. Zero images
/// count as contained and contribute no margin.
ConeMapCertificate maps_cone_into(const Matrix& a, const Cone& k, const Cone& k2, int samples);

/// Almost-multiplicativity constant of a family sharing a cone condition:
/// min over ordered pairs (i,j) of |A_i A_j| / (|A_i| |A_j|). Every member
/// must individually pass maps_cone_into(., k, k2) with 1000 samples;
/// failures throw ValidationError naming the offending index.
double almost_mult_constant(const std::vector<Matrix>& family, const Cone& k, const Cone& k2);

/// True iff every singular value of a lies in [exp(lambda - eps),
/// exp(lambda + eps)].
bool conformal_check(const Matrix& a, double lambda, double eps);

/// Block structure (d_1, tau_1), ..., (d_p, tau_p) with tolerance eps:
/// block i is conformal at scale exp(tau_i) up to eps, and consecutive
/// scales separate, tau_i - eps > tau_{i+1} + eps.
struct HyperbolicClassSpec {
  std::vector<int> dims;
  std::vector<double> taus;
  double eps = 0.0;

  /// Validates positive dims, the separation condition, and eps > 0.
  static HyperbolicClassSpec make(const std::vector<std::pair<int, double>>& blocks,
                                  double eps);

  int blocks() const noexcept { return static_cast<int>(dims.size()); }
  int total_dim() const noexcept;
  /// t_r = d_1 + ... + d_r for r in 1..p; t_0 = 0.
  int t_cum(int r) const;
};

struct SvBandReport {
  bool ok = false;
  int bad_index = -1;  // first singular value index (0-based, descending
                       // order) outside its block band, -1 when ok
};

/// Checks that the sorted singular values of a block-diagonal h land in
/// their block bands [exp(tau_r - eps), exp(tau_r + eps)]. Throws
/// ValidationError when h is not block-diagonal for the spec's dims.
SvBandReport hyperbolic_sv_check(const Matrix& h, const HyperbolicClassSpec& spec);

struct WedgeEigenReport {
  bool ok = false;           // parallel_ok && eigen_ok && others_ok
  bool parallel_ok = false;  // wedge image of e_1^...^e_t parallel to itself
  bool eigen_ok = false;     // |eigenvalue| >= eigen_lower
  bool others_ok = false;    // every other basis image norm <= other_upper
  double eigenvalue = 0.0;   // signed
  double eigen_lower = 0.0;  // exp(Gamma_r - t eps)
  double max_other = 0.0;
  double other_upper = 0.0;  // exp(Gamma_r + tau_{r+1} - tau_r + t eps); inf
                             // when r is the last block (no other columns)
};

/// Exterior-power eigenvector check at the block cut r (1-based): with
/// t = t_r, e_1^...^e_t is an eigenvector of h^(wedge t), its eigenvalue is
/// at least exp(Gamma_r - t eps) in modulus, and every other canonical
/// wedge basis vector maps to norm at most
/// exp(Gamma_r + tau_{r+1} - tau_r + t eps), Gamma_r = sum_{i<=r} d_i tau_i.
WedgeEigenReport wedge_eigen_check(const Matrix& h, const HyperbolicClassSpec& spec, int r);

struct ConeContractionReport {
  bool ok = false;             // hypothesis_ok && certificate.holds
  bool hypothesis_ok = false;  // |A restricted to v-perp| < lambda / 18
  double restricted_norm = 0.0;
  double threshold = 0.0;  // lambda / 18
  ConeMapCertificate certificate;  // 10^4 samples, only run when the
                                   // hypothesis holds
};

/// Eigenvector cone contraction: requires A v = lambda v to 1e-10 relative
/// residual and lambda > 0 (ValidationError otherwise), then checks the
/// norm of A on the orthogonal complement of v against lambda/18 and, when
/// that holds, certifies C(v,1/2) -> C(v,1/5) by sampling.
ConeContractionReport cone_contraction_check(const Matrix& a, std::span<const double> v,
                                             double lambda);

struct BlockDiagConeReport {
  bool hypothesis_ok = false;      // constant < 1/18
  double hypothesis_value = 0.0;   // sqrt(binom(d, floor(d/2))) *
                                   // max_r exp(tau_{r+1} - tau_r + 2 d eps)
  bool all_hold = false;
  std::vector<ConeMapCertificate> certificates;  // one per cut r = 1..p-1
};

/// Quantitative hypothesis check plus per-cut sampled certificates that
/// h^(wedge t_r) maps C(e_1^...^e_t_r, 1/2) into the half-aperture 1/5
/// cones. A failed hypothesis is a report outcome, not an error. Requires
/// at least two blocks and a block-diagonal h.
BlockDiagConeReport block_diag_cone_check(const Matrix& h, const HyperbolicClassSpec& spec);

}  // namespace plab
