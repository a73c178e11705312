#include "plab/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <string>

#include "plab/errors.hpp"

namespace plab {

namespace {

constexpr double kZeroCut = 1e-300;  // below this a singular value is an exact zero
constexpr int kMaxExteriorDim = 70;  // C(8,4)

double det_destructive(double* m, int n) {
  // LU with partial pivoting; m is row-major and gets clobbered.
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    double best = std::fabs(m[c * n + c]);
    for (int r = c + 1; r < n; ++r) {
      const double v = std::fabs(m[r * n + c]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(m[c * n + j], m[piv * n + j]);
      det = -det;
    }
    const double d = m[c * n + c];
    det *= d;
    for (int r = c + 1; r < n; ++r) {
      const double f = m[r * n + c] / d;
      for (int j = c + 1; j < n; ++j) m[r * n + j] -= f * m[c * n + j];
    }
  }
  return det;
}

}  // namespace

Matrix::Matrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim, 0.0) {
  if (dim < 1) throw ValidationError("matrix dim must be >= 1");
}

Matrix::Matrix(int dim, std::initializer_list<double> row_major) : Matrix(dim) {
  if (row_major.size() != a_.size())
    throw ValidationError("matrix initializer has wrong length");
  std::copy(row_major.begin(), row_major.end(), a_.begin());
}

Matrix Matrix::identity(int dim) {
  Matrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const int d = static_cast<int>(rows.size());
  Matrix m(d);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != d)
      throw ValidationError("matrix rows must form a square");
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

bool Matrix::all_finite() const noexcept {
  for (double v : a_)
    if (!std::isfinite(v)) return false;
  return true;
}

Matrix& Matrix::operator*=(double c) noexcept {
  for (double& v : a_) v *= c;
  return *this;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (other.dim_ != dim_) throw ValidationError("matrix dims differ in +=");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += other.a_[i];
  return *this;
}

void mul_into(const Matrix& a, const Matrix& b, Matrix& out) {
  const int d = a.dim();
  const double* pa = a.data();
  const double* pb = b.data();
  double* po = out.data();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += pa[i * d + k] * pb[k * d + j];
      po[i * d + j] = s;
    }
  }
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) throw ValidationError("matrix dims differ in product");
  Matrix out(a.dim());
  mul_into(a, b, out);
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  Matrix out = a;
  out += b;
  return out;
}

Matrix operator*(double c, const Matrix& a) {
  Matrix out = a;
  out *= c;
  return out;
}

Matrix transpose(const Matrix& a) {
  const int d = a.dim();
  Matrix out(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(j, i) = a(i, j);
  return out;
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  const double* p = a.data();
  const size_t n = static_cast<size_t>(a.dim()) * a.dim();
  for (size_t i = 0; i < n; ++i) s += p[i] * p[i];
  return std::sqrt(s);
}

double determinant(const Matrix& a) {
  const int d = a.dim();
  if (d == 1) return a(0, 0);
  if (d == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  if (d <= 8) {
    std::array<double, 64> buf;
    std::memcpy(buf.data(), a.data(), sizeof(double) * d * d);
    return det_destructive(buf.data(), d);
  }
  std::vector<double> buf(a.data(), a.data() + static_cast<size_t>(d) * d);
  return det_destructive(buf.data(), d);
}

namespace detail {

void jacobi_singular_values(const double* a, int d, double* out_alpha) {
  // One-sided Jacobi: orthogonalize the columns of A, then read off their
  // norms. Column-major working copy.
  std::array<double, 64> small;
  std::vector<double> big;
  double* u;
  if (d <= 8) {
    u = small.data();
  } else {
    big.resize(static_cast<size_t>(d) * d);
    u = big.data();
  }
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) u[j * d + i] = a[i * d + j];

  constexpr double eps = 1e-15;
  constexpr int max_sweeps = 48;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < d - 1; ++p) {
      for (int q = p + 1; q < d; ++q) {
        double* cp = u + p * d;
        double* cq = u + q * d;
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (int i = 0; i < d; ++i) {
          app += cp[i] * cp[i];
          aqq += cq[i] * cq[i];
          apq += cp[i] * cq[i];
        }
        if (apq == 0.0 || std::fabs(apq) <= eps * std::sqrt(app * aqq)) continue;
        rotated = true;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < d; ++i) {
          const double vp = cp[i], vq = cq[i];
          cp[i] = c * vp - s * vq;
          cq[i] = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  for (int j = 0; j < d; ++j) {
    double s = 0.0;
    const double* cj = u + j * d;
    for (int i = 0; i < d; ++i) s += cj[i] * cj[i];
    out_alpha[j] = std::sqrt(s);
  }
  std::sort(out_alpha, out_alpha + d, std::greater<double>());
}

}  // namespace detail

SingularSpectrum singular_values(const Matrix& a) {
  const int d = a.dim();
  SingularSpectrum sp;
  sp.alpha.resize(d);
  sp.log_alpha.resize(d);
  detail::jacobi_singular_values(a.data(), d, sp.alpha.data());
  for (int i = 0; i < d; ++i) {
    if (sp.alpha[i] < kZeroCut) {
      sp.alpha[i] = 0.0;
      sp.log_alpha[i] = kNegInf;
    } else {
      sp.log_alpha[i] = std::log(sp.alpha[i]);
    }
  }
  return sp;
}

double operator_norm(const Matrix& a) {
  const int d = a.dim();
  if (d <= 8) {
    std::array<double, 8> alpha;
    detail::jacobi_singular_values(a.data(), d, alpha.data());
    return alpha[0];
  }
  return singular_values(a).alpha[0];
}

ScaledMatrix::ScaledMatrix(const Matrix& m) : core_(m), log_scale_(0.0) { normalize(); }

ScaledMatrix ScaledMatrix::identity(int dim) {
  ScaledMatrix s(Matrix::identity(dim));
  return s;
}

void ScaledMatrix::normalize() {
  const double fn = frobenius_norm(core_);
  if (fn < kZeroCut || !std::isfinite(fn)) {
    if (!std::isfinite(fn)) throw ValidationError("non-finite matrix in scaled product");
    core_ = Matrix(core_.dim());
    log_scale_ = kNegInf;
    return;
  }
  const double target = std::sqrt(2.0);
  core_ *= target / fn;
  log_scale_ += std::log(fn / target);
}

void ScaledMatrix::right_multiply_into(const Matrix& a, ScaledMatrix& out) const {
  if (is_zero()) {
    out.core_ = Matrix(core_.dim());
    out.log_scale_ = kNegInf;
    return;
  }
  if (&out == this) {
    Matrix tmp(core_.dim());
    mul_into(core_, a, tmp);
    out.core_ = std::move(tmp);
  } else {
    if (out.core_.dim() != core_.dim()) out.core_ = Matrix(core_.dim());
    mul_into(core_, a, out.core_);
  }
  out.log_scale_ = log_scale_;
  out.normalize();
}

void ScaledMatrix::left_multiply_into(const Matrix& a, ScaledMatrix& out) const {
  if (is_zero()) {
    out.core_ = Matrix(core_.dim());
    out.log_scale_ = kNegInf;
    return;
  }
  if (&out == this) {
    Matrix tmp(core_.dim());
    mul_into(a, core_, tmp);
    out.core_ = std::move(tmp);
  } else {
    if (out.core_.dim() != core_.dim()) out.core_ = Matrix(core_.dim());
    mul_into(a, core_, out.core_);
  }
  out.log_scale_ = log_scale_;
  out.normalize();
}

double ScaledMatrix::log_frobenius() const noexcept {
  if (is_zero()) return kNegInf;
  return log_scale_ + 0.5 * std::log(2.0);
}

ScaledMatrix operator*(const ScaledMatrix& a, const ScaledMatrix& b) {
  if (a.is_zero() || b.is_zero()) return ScaledMatrix(Matrix(a.dim()));
  ScaledMatrix out;
  a.right_multiply_into(b.core(), out);
  out.log_scale_ += b.log_scale();  // core product carried only a's scale
  return out;
}

SingularSpectrum singular_values(const ScaledMatrix& m) {
  SingularSpectrum sp = singular_values(m.core());
  const int d = sp.dim();
  for (int i = 0; i < d; ++i) {
    if (m.is_zero() || sp.log_alpha[i] == kNegInf || sp.alpha[i] < kZeroCut) {
      sp.alpha[i] = 0.0;
      sp.log_alpha[i] = kNegInf;
    } else {
      sp.log_alpha[i] += m.log_scale();
      sp.alpha[i] = std::exp(sp.log_alpha[i]);
    }
  }
  return sp;
}

double log_operator_norm(const ScaledMatrix& m) {
  if (m.is_zero()) return kNegInf;
  const double a1 = operator_norm(m.core());
  if (a1 < kZeroCut) return kNegInf;
  return std::log(a1) + m.log_scale();
}

double svf_log_from_log_alphas(std::span<const double> log_alpha, double s) {
  if (s < 0.0) throw ValidationError("svf exponent s must be >= 0");
  const int d = static_cast<int>(log_alpha.size());
  if (s == 0.0) return 0.0;
  if (s <= static_cast<double>(d)) {
    const int m = static_cast<int>(std::floor(s));
    const double frac = s - static_cast<double>(m);
    double acc = 0.0;
    // written as 1.0 * x so the operation sequence matches the generalized
    // kernel bit for bit under the flag weight vector
    for (int i = 0; i < m; ++i) acc += 1.0 * log_alpha[i];
    if (frac != 0.0) acc += frac * log_alpha[m];
    return acc;
  }
  double total = 0.0;
  for (int i = 0; i < d; ++i) total += log_alpha[i];
  return (s / static_cast<double>(d)) * total;
}

double generalized_svf_log_from_log_alphas(std::span<const double> log_alpha,
                                           std::span<const double> s_vec) {
  double acc = 0.0;
  const int d = static_cast<int>(log_alpha.size());
  for (int i = 0; i < d; ++i) {
    const double w = s_vec[i];
    if (w != 0.0) acc += w * log_alpha[i];
  }
  return acc;
}

bool svf_weights_valid(std::span<const double> s_vec, int d) {
  if (static_cast<int>(s_vec.size()) != d) return false;
  double prev = std::numeric_limits<double>::infinity();
  for (double w : s_vec) {
    if (!(w >= 0.0) || w > prev) return false;
    prev = w;
  }
  return true;
}

std::vector<double> scalar_svf_weights(double s, int d) {
  if (s < 0.0 || s > static_cast<double>(d))
    throw ValidationError("flag weights need 0 <= s <= dim");
  std::vector<double> w(static_cast<size_t>(d), 0.0);
  const int m = static_cast<int>(std::floor(s));
  for (int i = 0; i < m && i < d; ++i) w[i] = 1.0;
  if (m < d) w[m] = s - static_cast<double>(m);
  return w;
}

double svf_log(const Matrix& a, double s) {
  return svf_log_from_log_alphas(singular_values(a).log_alpha, s);
}

double svf_log(const ScaledMatrix& a, double s) {
  return svf_log_from_log_alphas(singular_values(a).log_alpha, s);
}

double generalized_svf_log(const Matrix& a, std::span<const double> s_vec) {
  if (!svf_weights_valid(s_vec, a.dim()))
    throw ValidationError("svf weight vector must be nonincreasing, >= 0, length dim");
  return generalized_svf_log_from_log_alphas(singular_values(a).log_alpha, s_vec);
}

double generalized_svf_log(const ScaledMatrix& a, std::span<const double> s_vec) {
  if (!svf_weights_valid(s_vec, a.dim()))
    throw ValidationError("svf weight vector must be nonincreasing, >= 0, length dim");
  return generalized_svf_log_from_log_alphas(singular_values(a).log_alpha, s_vec);
}

uint64_t binomial(int n, int j) {
  if (j < 0 || j > n) return 0;
  j = std::min(j, n - j);
  uint64_t r = 1;
  for (int i = 1; i <= j; ++i) {
    r = r * static_cast<uint64_t>(n - j + i) / static_cast<uint64_t>(i);
  }
  return r;
}

std::vector<std::vector<int>> lex_subsets(int n, int j) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(j);
  for (int i = 0; i < j; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = j - 1;
    while (i >= 0 && cur[i] == n - j + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int t = i + 1; t < j; ++t) cur[t] = cur[t - 1] + 1;
  }
  return out;
}

Matrix exterior_power(const Matrix& a, int j) {
  const int d = a.dim();
  if (j < 1 || j > d)
    throw ValidationError("exterior power order must be in 1..dim");
  if (d > kMaxAmbientDim)
    throw ValidationError("exterior power input dim must be <= 8");
  const auto subsets = lex_subsets(d, j);
  const int dd = static_cast<int>(subsets.size());
  Matrix out(dd);
  std::array<double, 64> buf;
  for (int r = 0; r < dd; ++r) {
    for (int c = 0; c < dd; ++c) {
      const auto& rows = subsets[r];
      const auto& cols = subsets[c];
      for (int ii = 0; ii < j; ++ii)
        for (int jj = 0; jj < j; ++jj) buf[ii * j + jj] = a(rows[ii], cols[jj]);
      out(r, c) = (j == 1) ? buf[0] : det_destructive(buf.data(), j);
    }
  }
  return out;
}

}  // namespace plab
