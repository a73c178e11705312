#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "plab/linalg.hpp"
#include "plab/symbolic.hpp"

namespace plab {

/// Locally constant matrix cocycle on an SFT: one matrix and one potential
/// weight g(i) per symbol. Products over words multiply left to right,
/// A_w = A_{w_1} ... A_{w_n}.
struct CocycleSpec {
  Sft sft;
  std::vector<Matrix> matrices;
  std::vector<double> potential;

  // derived at construction
  std::vector<double> op_norms;
  std::vector<double> min_singulars;
  std::vector<double> log_abs_dets;  // -inf for singular matrices
  std::vector<bool> invertible;      // |det| > 1e-12 * |A|^d
  bool all_invertible = false;
  bool contractive = false;      // all |A_i| < 1
  bool norms_below_half = false;

  /// Validates shape (equal dims 1..8, k matrices, finite entries, potential
  /// length k or empty for zeros) and computes the derived flags.
  static CocycleSpec make(Sft sft, std::vector<Matrix> matrices,
                          std::vector<double> potential = {});

  int dim() const noexcept { return matrices.empty() ? 0 : matrices[0].dim(); }
  int k() const noexcept { return sft.k(); }
  double g(int symbol) const noexcept { return potential[static_cast<size_t>(symbol)]; }
};

/// Exponent parameter: a scalar s >= 0 or a nonincreasing nonnegative weight
/// vector (one weight per singular value).
class Exponent {
 public:
  static Exponent scalar(double s);
  static Exponent flags(std::vector<double> weights);

  bool is_scalar() const noexcept { return scalar_; }
  double s() const noexcept { return s_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  /// s for scalars, sum of weights for flag vectors; drives the junction
  /// correction.
  double total() const noexcept;

 private:
  bool scalar_ = true;
  double s_ = 0.0;
  std::vector<double> weights_;
};

enum class PressureMode { svf, norm };

struct Budgets {
  int n_max = 10;
  uint64_t word_budget = uint64_t{1} << 24;
  uint64_t cache_bytes = uint64_t{1} << 28;
  int cache_level_max = 12;
  int workers = 1;
};

struct LevelPoint {
  int n;
  double value;  // (1/n) log S_n
};

struct PressureEstimate {
  double lower = kNegInf;  // rigorous; -inf when no junction word exists
  double upper = 0.0;      // rigorous: min over computed levels of (1/n) log S_n
  double point = 0.0;      // extrapolated, clamped into [lower, upper]
  std::vector<LevelPoint> levels;
  PressureMode mode = PressureMode::svf;
  bool determinant_route = false;  // scalar s > d evaluated via the weighted
                                   // transfer matrix instead of enumeration
  bool lower_clamped = false;      // junction bound exceeded upper and was clamped
  bool junction_applicable = false;
};

/// Evaluates level sums for one cocycle, caching per-word log singular
/// values so repeated evaluations at different exponents (dimension
/// bisection, Legendre sweeps) only pay the enumeration once per level.
/// Not thread-safe across calls; each call parallelizes internally over
/// lexicographic prefix partitions with a fixed-shape deterministic merge.
class PressureEngine {
 public:
  explicit PressureEngine(CocycleSpec spec, Budgets budgets = {});

  const CocycleSpec& spec() const noexcept { return spec_; }
  const Budgets& budgets() const noexcept { return budgets_; }

  /// log S_n = log sum over allowed length-n words of
  /// exp(sum g) * phi^exponent (svf mode) or exp(sum g) * |A_w|^s (norm
  /// mode). Deterministic for any worker count. Throws BudgetError
  /// ("word_budget") when the level is too large.
  double level_sum_log(const Exponent& e, PressureMode mode, int n);

  /// min over n in {1..n_max} of (1/n) log S_n; rigorous upper bound.
  double pressure_upper(const Exponent& e, PressureMode mode, int n_max);

  /// Junction-corrected lower bound at one level. On a full shift any two
  /// words concatenate, so the full sum is supermultiplicative up to the
  /// junction factor: (1/n)(log S_n + s_total * min over words of
  /// log(alpha_d/alpha_1)). On a proper shift the sum and the min restrict
  /// to words that start at a common symbol c and may return to it
  /// (allowed(last, c)), maximized over c; the unrestricted sum is not
  /// supermultiplicative there. -inf when no qualifying word exists or a
  /// minimizing block is singular.
  double pressure_lower(const Exponent& e, PressureMode mode, int n);

  /// Levels {1..min(12,n_max)} plus {16,20,24} up to n_max, rigorous bounds,
  /// and a point estimate extrapolated from the top three levels against
  /// 1/n. Scalar s > dim in svf mode switches to the exact determinant
  /// route: P = log rho(diag(e^g |det A|^(s/d)) * T).
  PressureEstimate estimate(const Exponent& e, PressureMode mode, int n_max);

 private:
  struct LevelData {
    uint64_t count = 0;
    bool cached = false;
    std::vector<double> log_alphas;  // count * d, absolute (scale folded in)
    std::vector<double> gsums;       // count
    std::vector<uint8_t> self_ok;    // count; word may follow itself
    std::vector<Word> parts;
    std::vector<uint64_t> part_offsets;
    double min_self_ratio = 0.0;  // min log(alpha_d/alpha_1) over self-concatenable words
    bool has_self = false;
    std::vector<double> anchor_ratio;  // per first symbol; -inf when no returning word
    bool stats_ready = false;
  };

  LevelData& level(int n);
  /// When anchored is non-null it receives, per first symbol c, the log sum
  /// over words starting at c that may return to c (-inf when empty).
  double eval_level(LevelData& lv, int n, const Exponent& e, PressureMode mode,
                    std::vector<double>* anchored = nullptr);
  double determinant_route_pressure(double s) const;

  CocycleSpec spec_;
  Budgets budgets_;
  std::map<int, LevelData> levels_;
  uint64_t cache_bytes_used_ = 0;
};

/// One-shot wrappers constructing a throwaway engine.
double level_sum_log(const CocycleSpec& spec, const Exponent& e, PressureMode mode, int n,
                     const Budgets& budgets = {});
double pressure_upper(const CocycleSpec& spec, const Exponent& e, PressureMode mode, int n_max,
                      const Budgets& budgets = {});
double pressure_lower(const CocycleSpec& spec, const Exponent& e, PressureMode mode, int n,
                      const Budgets& budgets = {});
PressureEstimate pressure_estimate(const CocycleSpec& spec, const Exponent& e, int n_max,
                                   const Budgets& budgets = {});
PressureEstimate norm_pressure(const CocycleSpec& spec, double s, int n_max,
                               const Budgets& budgets = {});

/// Closed-form pressure for d=1 full shifts: log sum_i e^g r_i^s. Used as
/// the variational-principle oracle.
double scalar_pressure_closed_form(const CocycleSpec& spec, double s);

/// log of the spectral radius of a real square matrix via scaled repeated
/// squaring (Gelfand). Accuracy around 1e-12; -inf for nilpotent/zero.
double log_spectral_radius(const Matrix& a);

}  // namespace plab
