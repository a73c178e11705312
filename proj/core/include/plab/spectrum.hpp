#pragma once

#include <cstdint>
#include <vector>

#include "plab/pressure.hpp"
#include "plab/symbolic.hpp"

namespace plab {

/// Lyapunov spectrum estimate: distinct exponents with multiplicities,
/// clustered from the d averaged QR growth rates. Exponents are strictly
/// decreasing; a trailing -inf group collects rank-collapse directions.
struct LyapunovData {
  std::vector<double> exponents;       // lambda_1 > ... > lambda_p
  std::vector<int> multiplicities;     // d_i, summing to d
  std::vector<double> std_errors;      // per exponent (0 for -inf groups)
  std::vector<int> t_cum;              // t_r = d_1 + ... + d_r
  std::vector<double> gamma;           // Gamma_r = sum_{i<=r} d_i lambda_i
  std::vector<double> raw_rates;       // the d averaged diagonal rates
  std::vector<double> raw_std_errors;
  int trials = 0;
  int horizon = 0;
  double cluster_gap = 0.0;
};

/// Orbit-sampling Lyapunov exponents: `trials` independent orbits of length
/// `horizon` from mu, products accumulated with QR re-orthonormalization
/// every 16 steps. Deterministic for a fixed seed regardless of worker
/// count. Throws ValidationError when mu is not supported on the spec's
/// shift or its kernel support is not strongly connected.
LyapunovData lyapunov_spectrum(const CocycleSpec& spec, const MarkovMeasure& mu, int horizon,
                               int trials, uint64_t seed, double cluster_gap = 0.05,
                               int workers = 1);

struct MonteCarloEstimate {
  double value = 0.0;  // -inf allowed
  double std_error = 0.0;
  int trials = 0;
  int horizon = 0;
};

/// Monte Carlo estimate of the expected singular-value-function growth rate
/// E_mu(A,s) = lim (1/n) E log phi^s(A(x,n)).
MonteCarloEstimate expected_svf_rate(const CocycleSpec& spec, const MarkovMeasure& mu, double s,
                                     int horizon, int trials, uint64_t seed, int workers = 1);

/// The rate predicted by the Lyapunov data: Gamma_r + (s - t_r) lambda_{r+1}
/// for t_r <= s <= t_{r+1}. Requires 0 <= s <= d.
double svf_rate_from_exponents(const LyapunovData& ly, double s);

struct LegendrePoint {
  double q;      // exponent, > 0
  double m;      // M(A,q) point estimate
  double alpha;  // numeric derivative of M at q
  double h;      // M - alpha q
};

struct LegendreSpectrum {
  std::vector<LegendrePoint> points;
  bool concave_ok = true;        // (alpha, h) graph concave within 1e-6
  bool admissible = true;        // every h in [-1e-9, log k + 1e-9]
  std::vector<int> kink_flags;   // indices where alpha spacing collapses
                                 // (subdifferential kink; h is reported from
                                 // one-sided difference quotients there)
};

/// Legendre spectrum of the norm pressure: M(A,q) point estimates over the
/// grid, alpha by central differences (3-point one-sided at the ends),
/// h = M - alpha q. Grid must be positive, strictly increasing, >= 3 points.
LegendreSpectrum legendre_spectrum(const CocycleSpec& spec, const std::vector<double>& q_grid,
                                   int n_max, const Budgets& budgets = {});

struct EquilibriumReport {
  MarkovMeasure measure;  // Bernoulli p_i proportional to e^g r_i^s
  double pressure = 0.0;  // closed form log sum e^g r^s
  double entropy = 0.0;   // h_p
  double energy = 0.0;    // sum p_i (g_i + s log r_i)
  double gap = 0.0;       // |entropy + energy - pressure|
};

/// Equilibrium state for d=1 full shifts; verifies the variational identity
/// h_p + energy = P. Throws ValidationError unless d = 1 and the shift is
/// full.
EquilibriumReport equilibrium_scalar(const CocycleSpec& spec, double s);

}  // namespace plab
