#pragma once

#include <vector>

#include "plab/pressure.hpp"

namespace plab {

struct DimensionAuditRow {
  double s;
  double lower, point, upper;  // pressure bracket at this s
};

struct DimensionResult {
  double s_lower = 0.0;        // bisection bracket around s(A), gap <= tol
  double s_upper = 0.0;
  double affinity_lower = 0.0;  // min(s_lower, d), min(s_upper, d)
  double affinity_upper = 0.0;
  int iterations = 0;
  bool norm_warning = false;    // some |A_i| >= 1/2: the almost-sure dimension
                                // formula's hypothesis fails, value still defined
  bool budget_limited = false;  // bisection stopped before reaching tol
  // rigorous sign certificates where the pressure bracket decided the sign;
  // +-inf when never certified on that side
  double certified_lower = kNegInf;
  double certified_upper = std::numeric_limits<double>::infinity();
  std::vector<DimensionAuditRow> audit;
};

/// Bisection for s(A) = inf{s >= 0 : P(A,s) <= 0} on the pressure point
/// estimate, with the rigorous pressure bracket recorded per iteration.
/// Scalar s above d is evaluated through the exact determinant route.
/// Throws ValidationError for non-contractive specs or tol < 1e-8.
DimensionResult singularity_dimension(const CocycleSpec& spec, double tol, int n_max,
                                      const Budgets& budgets = {});

/// Same computation reported as min(s(A), d).
DimensionResult affinity_dimension(const CocycleSpec& spec, double tol, int n_max,
                                   const Budgets& budgets = {});

struct JsrResult {
  double lower = 0.0;   // max over words |w| <= n of rho(A_w)^(1/|w|)
  double upper = 0.0;   // max over words |w| = n of |A_w|^(1/n)
  double pressure_based = 0.0;     // exp(M_n(A,s)/s) at s = s_large
  double pressure_adjusted = 0.0;  // exp((M_n(A,s) - log k)/s): the count-corrected reading
  double band_lower = 0.0;         // audit band [lower, upper * k^(1/n)]
  double band_upper = 0.0;
  int n = 0;
  double s_large = 0.0;
};

/// Joint spectral radius bracket by exhaustive product enumeration on the
/// full shift, plus the norm-pressure extraction at a large exponent.
JsrResult jsr_estimate(const std::vector<Matrix>& matrices, int n, double s_large = 64.0,
                       const Budgets& budgets = {});

}  // namespace plab
