#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace plab {

/// Ambient dimension cap for cocycle matrices. Exterior powers of these live
/// in spaces of dimension up to C(8,4) = 70, and all routines below accept
/// that range.
inline constexpr int kMaxAmbientDim = 8;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Dense square matrix of doubles, row-major. Dimension is fixed at
/// construction and at least 1.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int dim);  // zero-filled
  Matrix(int dim, std::initializer_list<double> row_major);

  static Matrix identity(int dim);
  /// Builds from nested rows, e.g. Matrix::from_rows({{1,0},{1,1}}).
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  int dim() const noexcept { return dim_; }
  double& operator()(int i, int j) noexcept { return a_[static_cast<size_t>(i) * dim_ + j]; }
  double operator()(int i, int j) const noexcept { return a_[static_cast<size_t>(i) * dim_ + j]; }
  const double* data() const noexcept { return a_.data(); }
  double* data() noexcept { return a_.data(); }

  bool all_finite() const noexcept;

  Matrix& operator*=(double c) noexcept;
  Matrix& operator+=(const Matrix& other);

 private:
  int dim_ = 0;
  std::vector<double> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator*(double c, const Matrix& a);

/// out = a * b. out must be pre-sized to the same dim and distinct from both
/// operands; no allocation happens.
void mul_into(const Matrix& a, const Matrix& b, Matrix& out);

Matrix transpose(const Matrix& a);
double frobenius_norm(const Matrix& a);
double determinant(const Matrix& a);

/// Full singular spectrum of one matrix. `alpha` is descending and
/// nonnegative; `log_alpha` carries -inf where the value is an exact zero
/// (anything below 1e-300 counts as zero).
struct SingularSpectrum {
  std::vector<double> alpha;
  std::vector<double> log_alpha;
  int dim() const noexcept { return static_cast<int>(alpha.size()); }
};

/// One-sided Jacobi, values only. Backward-stable; relative accuracy around
/// 1e-14 for well-conditioned inputs at these sizes.
SingularSpectrum singular_values(const Matrix& a);

/// Largest singular value.
double operator_norm(const Matrix& a);

namespace detail {

/// Raw Jacobi kernel: reads a row-major d x d matrix, writes d descending
/// singular values into out_alpha. No allocation for d <= 8; used by the
/// enumeration hot loops.
void jacobi_singular_values(const double* a, int d, double* out_alpha);

}  // namespace detail

/// Product of matrices kept in log scale: represents exp(log_scale) * core
/// where the core is renormalized to Frobenius norm sqrt(2) after every
/// multiplication. That pins the core's operator norm inside [1/2, 2] for all
/// dims up to 8. A zero product is the sentinel log_scale == -inf with a
/// zero core.
class ScaledMatrix {
 public:
  ScaledMatrix() = default;
  explicit ScaledMatrix(const Matrix& m);
  static ScaledMatrix identity(int dim);

  int dim() const noexcept { return core_.dim(); }
  const Matrix& core() const noexcept { return core_; }
  double log_scale() const noexcept { return log_scale_; }
  bool is_zero() const noexcept { return log_scale_ == kNegInf; }

  /// out = (*this) * a, renormalized. out may alias *this.
  void right_multiply_into(const Matrix& a, ScaledMatrix& out) const;

  /// out = a * (*this), renormalized. out may alias *this. Cocycle products
  /// grow on the left as the orbit advances.
  void left_multiply_into(const Matrix& a, ScaledMatrix& out) const;

  /// log of the Frobenius norm of the represented matrix.
  double log_frobenius() const noexcept;

  friend ScaledMatrix operator*(const ScaledMatrix& a, const ScaledMatrix& b);

 private:
  void normalize();

  Matrix core_;
  double log_scale_ = 0.0;
};

ScaledMatrix operator*(const ScaledMatrix& a, const ScaledMatrix& b);

/// Spectrum of the represented matrix. log_alpha is authoritative: alpha is
/// exp(log_alpha) and may saturate to inf/0 for extreme scales. Core singular
/// values below 1e-300 are exact zeros (log_alpha = -inf).
SingularSpectrum singular_values(const ScaledMatrix& m);

double log_operator_norm(const ScaledMatrix& m);

/// log phi^s from precomputed descending log singular values (full length d,
/// -inf entries allowed). For 0 <= s <= d this is
///   log a_1 + ... + log a_m + (s - m) log a_{m+1},   m = floor(s),
/// with the 0^0 = 1 convention (a zero alpha raised to power 0 contributes
/// nothing). For s > d it is (s/d) * (log a_1 + ... + log a_d), i.e. the
/// |det|^(s/d) continuation. Returns -inf when the value is exactly zero.
double svf_log_from_log_alphas(std::span<const double> log_alpha, double s);

/// log of the multi-exponent singular value function prod alpha_j^(s_j).
/// Weights with s_j == 0 are skipped entirely (0^0 = 1). Callers must pass a
/// validated weight vector (see svf_weights_valid).
double generalized_svf_log_from_log_alphas(std::span<const double> log_alpha,
                                           std::span<const double> s_vec);

/// True when s_vec is nonincreasing, nonnegative, and matches dim d.
bool svf_weights_valid(std::span<const double> s_vec, int d);

/// Scalar-parameter singular value function, log scale. Throws
/// ValidationError for s < 0.
double svf_log(const Matrix& a, double s);
double svf_log(const ScaledMatrix& a, double s);

/// Multi-exponent singular value function, log scale. Throws ValidationError
/// unless s_vec is nonincreasing, nonnegative, and of length dim.
double generalized_svf_log(const Matrix& a, std::span<const double> s_vec);
double generalized_svf_log(const ScaledMatrix& a, std::span<const double> s_vec);

/// The flag weight vector (1,...,1, s - m, 0,...,0) whose generalized value
/// reproduces the scalar svf exactly. Requires 0 <= s <= d.
std::vector<double> scalar_svf_weights(double s, int d);

uint64_t binomial(int n, int j);

/// j-th exterior power: the C(d,j) x C(d,j) matrix of j x j minors, rows and
/// columns indexed by size-j subsets of {0..d-1} in lexicographic order.
/// Satisfies (AB)^j = A^j B^j and |A^j| = alpha_1 ... alpha_j (operator
/// norm). Throws ValidationError for j outside 1..d.
Matrix exterior_power(const Matrix& a, int j);

/// Subsets of {0..n-1} of size j in lexicographic order; the index layout
/// used by exterior_power.
std::vector<std::vector<int>> lex_subsets(int n, int j);

}  // namespace plab
