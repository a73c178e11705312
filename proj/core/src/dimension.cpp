#include "plab/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "plab/errors.hpp"

namespace plab {

namespace {

constexpr int kMaxBisectIters = 200;

struct PressureAt {
  PressureEngine* engine;
  PressureMode mode;
  int n_max;
  DimensionResult* result;

  PressureEstimate operator()(double s) const {
    PressureEstimate est = engine->estimate(Exponent::scalar(s), mode, n_max);
    result->audit.push_back({s, est.lower, est.point, est.upper});
    // rigorous sign certificates: lower > 0 forces P(s) > 0, upper < 0
    // forces P(s) < 0; pressure is nonincreasing in s
    if (est.lower > 0.0) result->certified_lower = std::max(result->certified_lower, s);
    if (est.upper < 0.0) result->certified_upper = std::min(result->certified_upper, s);
    return est;
  }
};

}  // namespace

DimensionResult singularity_dimension(const CocycleSpec& spec, double tol, int n_max,
                                      const Budgets& budgets) {
  if (!(tol >= 1e-8))
    throw ValidationError("dimension_tol must be >= 1e-8");
  if (!spec.contractive)
    throw ValidationError(
        "singularity dimension needs a contractive system (all |A_i| < 1)");
  if (n_max < 1) throw ValidationError("n_max must be >= 1");

  DimensionResult res;
  res.norm_warning = !spec.norms_below_half;
  const int d = spec.dim();

  PressureEngine engine(spec, budgets);
  PressureAt pressure{&engine, PressureMode::svf, n_max, &res};

  if (pressure(0.0).point <= 0.0) {
    res.s_lower = res.s_upper = 0.0;
    res.affinity_lower = res.affinity_upper = 0.0;
    return res;
  }

  double lo = 0.0;
  double hi = 5.0 * d;
  while (pressure(hi).point > 0.0) {
    ++res.iterations;
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) {
      // cannot happen for contractive specs (P(s) <= log k + s log max|A_i|)
      res.budget_limited = true;
      break;
    }
  }

  while (hi - lo > tol && res.iterations < kMaxBisectIters) {
    ++res.iterations;
    const double mid = 0.5 * (lo + hi);
    if (pressure(mid).point > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  if (hi - lo > tol) res.budget_limited = true;

  res.s_lower = lo;
  res.s_upper = hi;
  res.affinity_lower = std::min(lo, static_cast<double>(d));
  res.affinity_upper = std::min(hi, static_cast<double>(d));
  return res;
}

DimensionResult affinity_dimension(const CocycleSpec& spec, double tol, int n_max,
                                   const Budgets& budgets) {
  return singularity_dimension(spec, tol, n_max, budgets);
}

JsrResult jsr_estimate(const std::vector<Matrix>& matrices, int n, double s_large,
                       const Budgets& budgets) {
  if (matrices.empty()) throw ValidationError("jsr needs at least one matrix");
  if (n < 1) throw ValidationError("jsr level n must be >= 1");
  if (!(s_large > 0.0)) throw ValidationError("s_large must be > 0");
  const int k = static_cast<int>(matrices.size());
  const int d = matrices[0].dim();

  // node count of the product tree: sum over m <= n of k^m
  uint64_t nodes = 0, pow = 1;
  for (int m = 1; m <= n; ++m) {
    if (__builtin_mul_overflow(pow, static_cast<uint64_t>(k), &pow) ||
        __builtin_add_overflow(nodes, pow, &nodes) || nodes > budgets.word_budget)
      throw BudgetError("word_budget", "jsr product tree at n = " + std::to_string(n) +
                                           " exceeds word_budget " +
                                           std::to_string(budgets.word_budget));
  }

  CocycleSpec spec = CocycleSpec::make(Sft::full_shift(k), matrices);

  JsrResult res;
  res.n = n;
  res.s_large = s_large;
  double best_lower = kNegInf;  // log scale
  double best_upper = kNegInf;

  std::vector<ScaledMatrix> prod(static_cast<size_t>(n));
  Word w(static_cast<size_t>(n));
  auto walk = [&](auto&& self, int depth) -> void {
    const double log_rho =
        prod[depth - 1].is_zero()
            ? kNegInf
            : log_spectral_radius(prod[depth - 1].core()) + prod[depth - 1].log_scale();
    if (log_rho != kNegInf) best_lower = std::max(best_lower, log_rho / depth);
    if (depth == n) {
      best_upper = std::max(best_upper, log_operator_norm(prod[depth - 1]) / depth);
      return;
    }
    for (int sym = 0; sym < k; ++sym) {
      w[depth] = static_cast<uint8_t>(sym);
      prod[depth - 1].right_multiply_into(matrices[sym], prod[depth]);
      self(self, depth + 1);
    }
  };
  for (int sym = 0; sym < k; ++sym) {
    w[0] = static_cast<uint8_t>(sym);
    prod[0] = ScaledMatrix(matrices[sym]);
    walk(walk, 1);
  }

  res.lower = best_lower == kNegInf ? 0.0 : std::exp(best_lower);
  res.upper = best_upper == kNegInf ? 0.0 : std::exp(best_upper);

  PressureEngine engine(spec, budgets);
  const double m_n = engine.level_sum_log(Exponent::scalar(s_large), PressureMode::norm, n) / n;
  res.pressure_based = m_n == kNegInf ? 0.0 : std::exp(m_n / s_large);
  res.pressure_adjusted =
      m_n == kNegInf ? 0.0 : std::exp((m_n - std::log(static_cast<double>(k))) / s_large);
  res.band_lower = res.lower;
  res.band_upper = res.upper * std::pow(static_cast<double>(k), 1.0 / n);
  (void)d;
  return res;
}

}  // namespace plab
