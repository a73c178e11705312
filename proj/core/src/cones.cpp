#include "plab/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "plab/errors.hpp"

namespace plab {

namespace {

constexpr double kZeroCut = 1e-300;
constexpr double kSlack = 1e-14;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void matvec(const Matrix& m, std::span<const double> x, std::vector<double>& y) {
  const int d = m.dim();
  y.assign(static_cast<size_t>(d), 0.0);
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) s += m(i, j) * x[static_cast<size_t>(j)];
    y[static_cast<size_t>(i)] = s;
  }
}

// sqrt(prime) Kronecker steps, enough for exterior-power spaces up to
// C(8,4) = 70 dimensions (needs an even number of coordinates >= dim-1)
const std::vector<double>& kronecker_steps() {
  static const std::vector<double> steps = [] {
    std::vector<double> out;
    int candidate = 2;
    while (out.size() < 72) {
      bool prime = true;
      for (int q = 2; q * q <= candidate; ++q)
        if (candidate % q == 0) {
          prime = false;
          break;
        }
      if (prime) out.push_back(std::sqrt(static_cast<double>(candidate)));
      ++candidate;
    }
    return out;
  }();
  return steps;
}

double kron_coord(int sample, int coord) {
  const double x = 0.5 + (sample + 1.0) * kronecker_steps()[static_cast<size_t>(coord)];
  double f = x - std::floor(x);
  if (f < 1e-12) f = 1e-12;
  return f;
}

// orthonormal basis of the complement of a unit vector v: columns 1..d-1 of
// the Householder reflection sending e_1 to -sign(v_1) v
std::vector<std::vector<double>> complement_basis(std::span<const double> v) {
  const int d = static_cast<int>(v.size());
  std::vector<std::vector<double>> basis;
  if (d <= 1) return basis;
  std::vector<double> u(v.begin(), v.end());
  const double sign = u[0] >= 0.0 ? 1.0 : -1.0;
  u[0] += sign;
  const double uu = dot(u, u);
  for (int j = 1; j < d; ++j) {
    std::vector<double> col(static_cast<size_t>(d), 0.0);
    col[static_cast<size_t>(j)] = 1.0;
    const double f = 2.0 * u[static_cast<size_t>(j)] / uu;
    for (int i = 0; i < d; ++i) col[static_cast<size_t>(i)] -= f * u[static_cast<size_t>(i)];
    basis.push_back(std::move(col));
  }
  return basis;
}

// quasi-uniform unit directions in the span of `basis` via Box-Muller on
// Kronecker points; deterministic in the sample index
std::vector<double> boundary_normal(const std::vector<std::vector<double>>& basis, int sample,
                                    int dim) {
  const int m = static_cast<int>(basis.size());
  std::vector<double> z(static_cast<size_t>(m));
  for (int l = 0; l < m; l += 2) {
    const double ua = kron_coord(sample, l);
    const double ub = kron_coord(sample, l + 1);
    const double rad = std::sqrt(-2.0 * std::log(ua));
    z[static_cast<size_t>(l)] = rad * std::cos(2.0 * std::numbers::pi * ub);
    if (l + 1 < m) z[static_cast<size_t>(l + 1)] = rad * std::sin(2.0 * std::numbers::pi * ub);
  }
  double zn = 0.0;
  for (double c : z) zn += c * c;
  zn = std::sqrt(zn);
  std::vector<double> u(static_cast<size_t>(dim), 0.0);
  if (zn < 1e-12) {
    return basis[static_cast<size_t>(sample % m)];
  }
  for (int l = 0; l < m; ++l) {
    const double c = z[static_cast<size_t>(l)] / zn;
    const auto& b = basis[static_cast<size_t>(l)];
    for (int i = 0; i < dim; ++i) u[static_cast<size_t>(i)] += c * b[static_cast<size_t>(i)];
  }
  return u;
}

void check_block_diagonal(const Matrix& h, const HyperbolicClassSpec& spec) {
  if (h.dim() != spec.total_dim())
    throw ValidationError("matrix dimension does not match the block structure");
  int start = 0;
  std::vector<int> block_of(static_cast<size_t>(h.dim()));
  for (size_t b = 0; b < spec.dims.size(); ++b) {
    for (int i = 0; i < spec.dims[b]; ++i) block_of[static_cast<size_t>(start + i)] = static_cast<int>(b);
    start += spec.dims[b];
  }
  for (int i = 0; i < h.dim(); ++i)
    for (int j = 0; j < h.dim(); ++j)
      if (block_of[static_cast<size_t>(i)] != block_of[static_cast<size_t>(j)] &&
          h(i, j) != 0.0)
        throw ValidationError("matrix is not block-diagonal for the given blocks");
}

}  // namespace

Cone Cone::around(std::vector<double> axis, double aperture) {
  if (!(aperture > 0.0) || !(aperture < 1.0))
    throw ValidationError("cone aperture must lie in (0,1)");
  const double n = norm(axis);
  if (!(n > 0.0) || !std::isfinite(n))
    throw ValidationError("cone axis must be a nonzero finite vector");
  for (double& c : axis) c /= n;
  Cone c;
  c.axis = std::move(axis);
  c.aperture = aperture;
  return c;
}

bool cone_contains(const Cone& c, std::span<const double> w) {
  if (static_cast<int>(w.size()) != c.dim())
    throw ValidationError("vector dimension does not match the cone");
  const double wn = norm(w);
  if (wn < kZeroCut) return true;
  return dot(c.axis, w) / wn >= (1.0 - c.aperture) - kSlack;
}

ConeMapCertificate maps_cone_into(const Matrix& a, const Cone& k, const Cone& k2, int samples) {
  if (samples < 1000) throw ValidationError("cone certificates need at least 1000 samples");
  if (a.dim() != k.dim() || a.dim() != k2.dim())
    throw ValidationError("matrix and cone dimensions differ");
  const int d = a.dim();
  const double cosk = 1.0 - k.aperture;
  const double sink = std::sqrt(1.0 - cosk * cosk);
  const auto basis = complement_basis(k.axis);

  ConeMapCertificate cert;
  cert.samples = samples;
  double margin = std::numeric_limits<double>::infinity();
  std::vector<double> w(static_cast<size_t>(d)), y;
  const int directions = basis.empty() ? 0 : samples;
  for (int i = -1; i < directions; ++i) {
    if (i < 0) {
      w.assign(k.axis.begin(), k.axis.end());
    } else {
      const auto u = boundary_normal(basis, i, d);
      for (int j = 0; j < d; ++j)
        w[static_cast<size_t>(j)] = cosk * k.axis[static_cast<size_t>(j)] + sink * u[static_cast<size_t>(j)];
    }
    matvec(a, w, y);
    const double yn = norm(y);
    if (yn < kZeroCut) continue;  // zero image: contained by convention
    margin = std::min(margin, std::fabs(dot(k2.axis, y)) / yn - (1.0 - k2.aperture));
  }
  if (!std::isfinite(margin)) margin = 0.0;  // every image collapsed
  cert.margin = margin;
  cert.holds = margin >= -kSlack;
  return cert;
}

double almost_mult_constant(const std::vector<Matrix>& family, const Cone& k, const Cone& k2) {
  if (family.empty()) throw ValidationError("empty matrix family");
  std::vector<double> norms;
  for (size_t i = 0; i < family.size(); ++i) {
    const auto cert = maps_cone_into(family[i], k, k2, 1000);
    if (!cert.holds)
      throw ValidationError("matrix at index " + std::to_string(i) +
                            " fails the cone condition");
    const double n = operator_norm(family[i]);
    if (n < kZeroCut)
      throw ValidationError("matrix at index " + std::to_string(i) + " has zero norm");
    norms.push_back(n);
  }
  double c = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < family.size(); ++i)
    for (size_t j = 0; j < family.size(); ++j)
      c = std::min(c, operator_norm(family[i] * family[j]) / (norms[i] * norms[j]));
  return c;
}

bool conformal_check(const Matrix& a, double lambda, double eps) {
  const SingularSpectrum sp = singular_values(a);
  return sp.alpha.back() >= std::exp(lambda - eps) && sp.alpha.front() <= std::exp(lambda + eps);
}

HyperbolicClassSpec HyperbolicClassSpec::make(
    const std::vector<std::pair<int, double>>& blocks, double eps) {
  if (blocks.empty()) throw ValidationError("block list is empty");
  if (!(eps > 0.0)) throw ValidationError("tolerance must be positive");
  HyperbolicClassSpec spec;
  spec.eps = eps;
  for (const auto& [d, tau] : blocks) {
    if (d < 1) throw ValidationError("block dimensions must be positive");
    spec.dims.push_back(d);
    spec.taus.push_back(tau);
  }
  for (size_t i = 0; i + 1 < spec.taus.size(); ++i)
    if (!(spec.taus[i] - eps > spec.taus[i + 1] + eps))
      throw ValidationError("block scales must separate: tau_i - eps > tau_{i+1} + eps");
  return spec;
}

int HyperbolicClassSpec::total_dim() const noexcept {
  int d = 0;
  for (int b : dims) d += b;
  return d;
}

int HyperbolicClassSpec::t_cum(int r) const {
  if (r < 0 || r > blocks()) throw ValidationError("block index out of range");
  int t = 0;
  for (int i = 0; i < r; ++i) t += dims[static_cast<size_t>(i)];
  return t;
}

SvBandReport hyperbolic_sv_check(const Matrix& h, const HyperbolicClassSpec& spec) {
  check_block_diagonal(h, spec);
  const SingularSpectrum sp = singular_values(h);
  SvBandReport rep;
  int j = 0;
  for (size_t b = 0; b < spec.dims.size(); ++b) {
    const double lo = std::exp(spec.taus[b] - spec.eps);
    const double hi = std::exp(spec.taus[b] + spec.eps);
    for (int i = 0; i < spec.dims[b]; ++i, ++j) {
      const double alpha = sp.alpha[static_cast<size_t>(j)];
      if (alpha < lo || alpha > hi) {
        rep.ok = false;
        rep.bad_index = j;
        return rep;
      }
    }
  }
  rep.ok = true;
  rep.bad_index = -1;
  return rep;
}

WedgeEigenReport wedge_eigen_check(const Matrix& h, const HyperbolicClassSpec& spec, int r) {
  check_block_diagonal(h, spec);
  if (r < 1 || r > spec.blocks()) throw ValidationError("block cut index out of range");
  const int t = spec.t_cum(r);
  const Matrix e = exterior_power(h, t);
  const int wd = e.dim();

  WedgeEigenReport rep;
  rep.eigenvalue = e(0, 0);
  double off = 0.0;
  for (int i = 1; i < wd; ++i) off += e(i, 0) * e(i, 0);
  rep.parallel_ok = std::sqrt(off) <= 1e-10 * (1.0 + std::fabs(rep.eigenvalue));

  double gamma = 0.0;
  for (int i = 0; i < r; ++i) gamma += spec.dims[static_cast<size_t>(i)] * spec.taus[static_cast<size_t>(i)];
  rep.eigen_lower = std::exp(gamma - t * spec.eps);
  rep.eigen_ok = std::fabs(rep.eigenvalue) >= rep.eigen_lower * (1.0 - 1e-12);

  if (r < spec.blocks()) {
    rep.other_upper = std::exp(gamma + spec.taus[static_cast<size_t>(r)] -
                               spec.taus[static_cast<size_t>(r - 1)] + t * spec.eps);
    for (int m = 1; m < wd; ++m) {
      double col = 0.0;
      for (int i = 0; i < wd; ++i) col += e(i, m) * e(i, m);
      rep.max_other = std::max(rep.max_other, std::sqrt(col));
    }
    rep.others_ok = rep.max_other <= rep.other_upper * (1.0 + 1e-12);
  } else {
    // t = d: the wedge space is one-dimensional, nothing else to bound
    rep.other_upper = std::numeric_limits<double>::infinity();
    rep.others_ok = true;
  }
  rep.ok = rep.parallel_ok && rep.eigen_ok && rep.others_ok;
  return rep;
}

ConeContractionReport cone_contraction_check(const Matrix& a, std::span<const double> v,
                                             double lambda) {
  const int d = a.dim();
  if (static_cast<int>(v.size()) != d) throw ValidationError("axis dimension mismatch");
  if (!(lambda > 0.0)) throw ValidationError("eigenvalue must be positive");
  std::vector<double> vn(v.begin(), v.end());
  const double n = norm(vn);
  if (!(n > 0.0)) throw ValidationError("axis must be nonzero");
  for (double& c : vn) c /= n;

  std::vector<double> y;
  matvec(a, vn, y);
  double res = 0.0;
  for (int i = 0; i < d; ++i) {
    const double r = y[static_cast<size_t>(i)] - lambda * vn[static_cast<size_t>(i)];
    res += r * r;
  }
  if (std::sqrt(res) > 1e-10 * lambda)
    throw ValidationError("axis is not an eigenvector for the given eigenvalue");

  ConeContractionReport rep;
  rep.threshold = lambda / 18.0;
  if (d > 1) {
    const auto basis = complement_basis(vn);
    Matrix m(d);  // A restricted to the complement, zero-padded square
    for (size_t l = 0; l < basis.size(); ++l) {
      matvec(a, basis[l], y);
      for (int i = 0; i < d; ++i) m(i, static_cast<int>(l)) = y[static_cast<size_t>(i)];
    }
    rep.restricted_norm = operator_norm(m);
  }
  rep.hypothesis_ok = rep.restricted_norm < rep.threshold;
  if (rep.hypothesis_ok) {
    rep.certificate =
        maps_cone_into(a, Cone::around(vn, 0.5), Cone::around(vn, 0.2), 10000);
    rep.ok = rep.certificate.holds;
  }
  return rep;
}

BlockDiagConeReport block_diag_cone_check(const Matrix& h, const HyperbolicClassSpec& spec) {
  check_block_diagonal(h, spec);
  if (spec.blocks() < 2)
    throw ValidationError("block cone check needs at least two blocks");
  const int d = spec.total_dim();

  BlockDiagConeReport rep;
  double worst = kNegInf;
  for (int r = 1; r < spec.blocks(); ++r)
    worst = std::max(worst, spec.taus[static_cast<size_t>(r)] -
                                spec.taus[static_cast<size_t>(r - 1)] + 2.0 * d * spec.eps);
  rep.hypothesis_value =
      std::sqrt(static_cast<double>(binomial(d, d / 2))) * std::exp(worst);
  rep.hypothesis_ok = rep.hypothesis_value < 1.0 / 18.0;
  if (!rep.hypothesis_ok) return rep;

  rep.all_hold = true;
  for (int r = 1; r < spec.blocks(); ++r) {
    const int t = spec.t_cum(r);
    const Matrix e = exterior_power(h, t);
    std::vector<double> axis(static_cast<size_t>(e.dim()), 0.0);
    axis[0] = 1.0;  // e_1^...^e_t is the first lexicographic wedge basis vector
    const auto cert = maps_cone_into(e, Cone::around(axis, 0.5), Cone::around(axis, 0.2), 10000);
    rep.all_hold = rep.all_hold && cert.holds;
    rep.certificates.push_back(cert);
  }
  return rep;
}

}  // namespace plab
