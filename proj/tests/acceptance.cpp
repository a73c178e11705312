// Acceptance harness: runs the twelve release criteria and prints one
// PASS/FAIL line each. Exit status is the number of failed criteria, so a
// clean release exits 0. Every tolerance is pinned here, next to its check.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "plab/cones.hpp"
#include "plab/continuity.hpp"
#include "plab/dimension.hpp"
#include "plab/linalg.hpp"
#include "plab/pressure.hpp"
#include "plab/spectrum.hpp"
#include "plab/symbolic.hpp"

using namespace plab;

namespace {

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

CocycleSpec scalar_spec(const std::vector<double>& rs, std::vector<double> g = {}) {
  std::vector<Matrix> ms;
  for (double r : rs) ms.push_back(Matrix::from_rows({{r}}));
  return CocycleSpec::make(Sft::full_shift(static_cast<int>(rs.size())), std::move(ms),
                           std::move(g));
}

Matrix random_matrix(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = u(rng);
  return m;
}

// ---------------------------------------------------------------------------
// 1. Scalar pressure exactness: d=1, r=(1/2,1/3), g=0 has
//    (1/n) log S_n = log(5/6) at every level.
bool crit_scalar_exact(std::string& detail) {
  PressureEngine engine(scalar_spec({0.5, 1.0 / 3.0}));
  const double closed = std::log(5.0 / 6.0);
  double worst = 0.0;
  for (int n = 1; n <= 12; ++n) {
    const double v = engine.level_sum_log(Exponent::scalar(1.0), PressureMode::svf, n) / n;
    worst = std::max(worst, std::fabs(v - closed));
  }
  detail = "worst |(1/n)log S_n - log(5/6)| = " + sci(worst);
  return worst <= 1e-10;
}

// 2. Moran dimension against an independent plain-double bisection oracle
//    for (1/2)^s + (1/3)^s = 1.
bool crit_moran(std::string& detail) {
  double lo = 0.0, hi = 8.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f = std::pow(0.5, mid) + std::pow(1.0 / 3.0, mid) - 1.0;
    (f > 0.0 ? lo : hi) = mid;
  }
  const double oracle = 0.5 * (lo + hi);

  const DimensionResult res = singularity_dimension(scalar_spec({0.5, 1.0 / 3.0}), 1e-8, 8);
  const double mid = 0.5 * (res.s_lower + res.s_upper);
  detail = "|s - oracle| = " + sci(std::fabs(mid - oracle));
  return std::fabs(mid - oracle) <= 1e-6 && !res.budget_limited;
}

// 3. Diagonal closed form: k=3 copies of diag(1/2,1/4) has
//    s(A) = 1 + (log 3 - log 2)/log 4.
bool crit_diag_dimension(std::string& detail) {
  const Matrix a = Matrix::from_rows({{0.5, 0.0}, {0.0, 0.25}});
  const auto spec = CocycleSpec::make(Sft::full_shift(3), {a, a, a});
  const DimensionResult res = singularity_dimension(spec, 1e-8, 12);
  const double expected = 1.0 + (std::log(3.0) - std::log(2.0)) / std::log(4.0);
  const double mid = 0.5 * (res.s_lower + res.s_upper);
  detail = "|s - closed form| = " + sci(std::fabs(mid - expected));
  return std::fabs(mid - expected) <= 1e-4;
}

// 4. Rank-drop dichotomy: P(A,1) = 0 (to fp roundoff, 1e-12), P(A,t) = -inf
//    bitwise for t > 1, and the delta-regularized family follows
//    log 2 + log(1/2) + 0.5 log delta at s = 1.5 to 1e-10.
bool crit_discontinuity(std::string& detail) {
  const Matrix a = Matrix::from_rows({{0.5, 0.0}, {0.0, 0.0}});
  PressureEngine engine(CocycleSpec::make(Sft::full_shift(2), {a, a}));

  const PressureEstimate at_one = engine.estimate(Exponent::scalar(1.0), PressureMode::svf, 8);
  if (!(std::fabs(at_one.point) <= 1e-12)) {
    detail = "|P(1)| = " + sci(std::fabs(at_one.point));
    return false;
  }
  for (double t : {1.01, 1.5, 2.0}) {
    const PressureEstimate est = engine.estimate(Exponent::scalar(t), PressureMode::svf, 8);
    if (est.point != kNegInf || est.upper != kNegInf) {
      detail = "P(" + sci(t) + ") finite on the rank-dropping locus";
      return false;
    }
  }
  double worst = 0.0;
  for (double delta : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const Matrix ad = Matrix::from_rows({{0.5, 0.0}, {0.0, delta}});
    PressureEngine pe(CocycleSpec::make(Sft::full_shift(2), {ad, ad}));
    const double p = pe.estimate(Exponent::scalar(1.5), PressureMode::svf, 6).point;
    const double closed = std::log(2.0) + std::log(0.5) + 0.5 * std::log(delta);
    worst = std::max(worst, std::fabs(p - closed));
  }
  detail = "worst regularized-family error = " + sci(worst);
  return worst <= 1e-10;
}

// 5. JSR golden pair: the lower bound reaches (1+sqrt 5)/2 at n=2 via
//    sqrt(rho(A1 A2)); the pressure route at s=64, n=12 lands within 1e-2.
bool crit_jsr(std::string& detail) {
  const std::vector<Matrix> ms = {Matrix::from_rows({{1.0, 1.0}, {0.0, 1.0}}),
                                  Matrix::from_rows({{1.0, 0.0}, {1.0, 1.0}})};
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  const JsrResult at2 = jsr_estimate(ms, 2, 64.0);
  if (std::fabs(at2.lower - phi) > 1e-10) {
    detail = "|lower(2) - phi| = " + sci(std::fabs(at2.lower - phi));
    return false;
  }
  const JsrResult at12 = jsr_estimate(ms, 12, 64.0);
  detail = "|pressure route - phi| = " + sci(std::fabs(at12.pressure_based - phi));
  return std::fabs(at12.pressure_based - phi) <= 1e-2;
}

// 6. Variational principle: engine pressure equals entropy + energy of the
//    closed-form equilibrium state on random scalar systems.
bool crit_variational(std::string& detail) {
  std::mt19937_64 rng(0x1a2b3c4d);
  std::uniform_real_distribution<double> ur(0.1, 0.9);
  std::uniform_real_distribution<double> ug(-1.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int k = 2 + t % 3;
    std::vector<double> rs(k), g(k);
    for (int i = 0; i < k; ++i) {
      rs[i] = ur(rng);
      g[i] = ug(rng);
    }
    const auto spec = scalar_spec(rs, g);
    for (double s : {0.5, 1.0, 1.5}) {
      const double p = pressure_estimate(spec, Exponent::scalar(s), 8).point;
      const EquilibriumReport eq = equilibrium_scalar(spec, s);
      worst = std::max(worst, std::fabs(p - (eq.entropy + eq.energy)));
    }
  }
  detail = "worst |P - (h + energy)| = " + sci(worst);
  return worst <= 1e-10;
}

// 7. SVF property suite: 10^4 random matrices, d in {2,3,4}; zero violations
//    of submultiplicativity, interpolation, and the wedge-norm identity at
//    1e-9 slack.
bool crit_svf_properties(std::string& detail) {
  std::mt19937_64 rng(0xacce5507);
  std::uniform_real_distribution<double> us(0.0, 1.0);
  long sub_bad = 0, interp_bad = 0, wedge_bad = 0;
  long total = 0;
  for (int d = 2; d <= 4; ++d) {
    const int count = d == 2 ? 3334 : 3333;
    Matrix prev(d);
    bool have_prev = false;
    for (int t = 0; t < count; ++t, ++total) {
      const Matrix a = random_matrix(d, rng);

      if (have_prev) {
        const Matrix ab = a * prev;
        for (double s = 0.5; s <= d + 0.25; s += 0.5) {
          const double lhs = svf_log(ab, s);
          const double rhs = svf_log(a, s) + svf_log(prev, s);
          if (rhs == kNegInf) {
            if (lhs != kNegInf) ++sub_bad;
          } else if (lhs > rhs + 1e-9) {
            ++sub_bad;
          }
        }
      }
      prev = a;
      have_prev = true;

      // chords of s -> log phi^s between integer knots lie below the curve
      const SingularSpectrum sv = singular_values(a);
      for (int m = 0; m < d; ++m) {
        for (int n = m + 1; n <= d; ++n) {
          const double fm = svf_log_from_log_alphas(sv.log_alpha, m);
          const double fn = svf_log_from_log_alphas(sv.log_alpha, n);
          if (fm == kNegInf || fn == kNegInf) continue;
          const double s = m + (n - m) * us(rng);
          const double chord = ((n - s) * fm + (s - m) * fn) / (n - m);
          if (svf_log_from_log_alphas(sv.log_alpha, s) < chord - 1e-9) ++interp_bad;
        }
      }

      for (int j = 1; j <= d; ++j) {
        double sum = 0.0;
        for (int i = 0; i < j; ++i) sum += sv.log_alpha[i];
        if (sum < -200.0) continue;  // both sides underflow together
        const double wedge = std::log(operator_norm(exterior_power(a, j)));
        if (std::fabs(wedge - sum) > 1e-9) ++wedge_bad;
      }
    }
  }
  detail = std::to_string(total) + " matrices; violations " + std::to_string(sub_bad) + "/" +
           std::to_string(interp_bad) + "/" + std::to_string(wedge_bad) +
           " (submult/interp/wedge)";
  return total == 10000 && sub_bad == 0 && interp_bad == 0 && wedge_bad == 0;
}

// 8. Expected svf growth matches Gamma_r + (s - t_r) lambda_{r+1} computed
//    from the exact exponents, within 3 Monte Carlo standard errors (plus a
//    1e-9 fp floor for the deterministic case, whose std error is 0).
bool crit_oseledets(std::string& detail) {
  double worst_fill = 0.0;  // fraction of the allowed band actually used
  const auto check = [&](const CocycleSpec& spec, const MarkovMeasure& mu, double s,
                         double predicted) {
    const MonteCarloEstimate mc = expected_svf_rate(spec, mu, s, 10000, 64, 11);
    const double err = std::fabs(mc.value - predicted);
    const double band = 3.0 * mc.std_error + 1e-9;
    if (err > band) return false;
    worst_fill = std::max(worst_fill, err / band);
    return true;
  };

  const auto diag = CocycleSpec::make(Sft::full_shift(1),
                                      {Matrix::from_rows({{0.5, 0.0}, {0.0, 0.25}})});
  const MarkovMeasure point_mass = MarkovMeasure::bernoulli({1.0});
  const double l1 = std::log(0.5), l2 = std::log(0.25);
  for (double s : {0.5, 1.0, 1.5, 2.0}) {
    const double predicted = s <= 1.0 ? s * l1 : l1 + (s - 1.0) * l2;
    if (!check(diag, point_mass, s, predicted)) {
      detail = "deterministic diagonal missed at s = " + sci(s);
      return false;
    }
  }

  const auto scal = scalar_spec({0.5, 0.25});
  const MarkovMeasure coin = MarkovMeasure::bernoulli({0.7, 0.3});
  const double lam = 0.7 * std::log(0.5) + 0.3 * std::log(0.25);
  for (double s : {0.3, 1.0}) {
    if (!check(scal, coin, s, s * lam)) {
      detail = "Bernoulli scalar missed at s = " + sci(s);
      return false;
    }
  }
  detail = "worst error at " + sci(100.0 * worst_fill) + "% of the 3-sigma band";
  return true;
}

// 9. Cone lemma suite: 100 hypothesis-satisfying matrices certify the
//    eigenvector cone contraction (10^4 boundary samples each, zero
//    failures); almost_mult_constant is positive on certified families; the
//    lower norm bound |AB| >= 0.99 c |A||B| holds on 10^3 fresh pairs.
bool crit_cones(std::string& detail) {
  std::mt19937_64 rng(0xacce5509);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  // orthonormal basis with a planted eigenvector and a small off-axis block
  const auto planted = [&](int d, double lambda) {
    std::vector<std::vector<double>> basis;
    while (static_cast<int>(basis.size()) < d) {
      std::vector<double> w(static_cast<size_t>(d));
      for (double& x : w) x = u(rng);
      for (const auto& b : basis) {
        double dot = 0.0;
        for (int i = 0; i < d; ++i) dot += w[static_cast<size_t>(i)] * b[static_cast<size_t>(i)];
        for (int i = 0; i < d; ++i) w[static_cast<size_t>(i)] -= dot * b[static_cast<size_t>(i)];
      }
      double nn = 0.0;
      for (double x : w) nn += x * x;
      if (nn < 1e-4) continue;
      nn = std::sqrt(nn);
      for (double& x : w) x /= nn;
      basis.push_back(std::move(w));
    }
    const std::vector<double>& v = basis[0];
    Matrix a(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = lambda * v[static_cast<size_t>(i)] * v[static_cast<size_t>(j)];
    // keep the stacked off-axis block strictly under lambda/18
    const double cap = 0.9 * (lambda / 18.0) / std::sqrt(static_cast<double>(d - 1));
    for (int col = 1; col < d; ++col) {
      std::vector<double> w(static_cast<size_t>(d));
      double nn = 0.0;
      for (double& x : w) {
        x = u(rng);
        nn += x * x;
      }
      const double target = cap * (0.3 + 0.6 * u01(rng)) / std::sqrt(nn);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          a(i, j) += w[static_cast<size_t>(i)] * target * basis[static_cast<size_t>(col)][static_cast<size_t>(j)];
    }
    return std::pair{a, v};
  };

  for (int t = 0; t < 100; ++t) {
    const int d = 2 + t % 3;
    const double lambda = 0.5 + 9.5 * u01(rng);
    const auto [a, v] = planted(d, lambda);
    const ConeContractionReport rep = cone_contraction_check(a, v, lambda);
    if (!rep.ok || !rep.certificate.holds || rep.certificate.samples != 10000) {
      detail = "contraction certificate failed at trial " + std::to_string(t);
      return false;
    }
  }

  // positive 2x2 families share the orthant cone pair
  const Cone orthant = Cone::around({1.0, 1.0}, 1.0 - 1.0 / std::sqrt(2.0));
  const Cone image = Cone::around({1.0, 1.0}, 0.06);
  std::vector<Matrix> corners;
  for (int bits = 0; bits < 16; ++bits) {
    Matrix m(2);
    for (int cell = 0; cell < 4; ++cell) m(cell / 2, cell % 2) = (bits >> cell) & 1 ? 1.0 : 0.5;
    corners.push_back(m);
  }
  const double c = almost_mult_constant(corners, orthant, image);
  if (!(c > 0.0) || std::fabs(c - 0.8) > 1e-6) {
    detail = "corner-family constant " + sci(c) + " (expected 0.8)";
    return false;
  }
  std::uniform_real_distribution<double> up(0.5, 1.0);
  const auto positive2 = [&] {
    Matrix m(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) = up(rng);
    return m;
  };
  for (int f = 0; f < 5; ++f) {
    std::vector<Matrix> family;
    for (int i = 0; i < 4; ++i) family.push_back(positive2());
    if (!(almost_mult_constant(family, orthant, image) > 0.0)) {
      detail = "random certified family " + std::to_string(f) + " lost positivity";
      return false;
    }
  }
  long violations = 0;
  double worst_ratio = 2.0;
  for (int t = 0; t < 1000; ++t) {
    const Matrix a = positive2(), b = positive2();
    const double ratio = operator_norm(a * b) / (operator_norm(a) * operator_norm(b));
    worst_ratio = std::min(worst_ratio, ratio);
    if (ratio < 0.99 * c) ++violations;
  }
  detail = "pair violations " + std::to_string(violations) + ", worst ratio " + sci(worst_ratio);
  return violations == 0;
}

// 10. Continuity trend on an invertible non-diagonal pair at s = 1: |dP|
//     strictly shrinks with epsilon, is <= 1e-2 at eps = 1e-4, and the
//     fixed-n upper-semicontinuity gaps never regress along the grid.
bool crit_continuity_trend(std::string& detail) {
  PerturbationScan scan;
  scan.base = CocycleSpec::make(
      Sft::full_shift(2), {Matrix::from_rows({{0.30, 0.10}, {0.05, 0.25}}),
                           Matrix::from_rows({{0.25, -0.08}, {0.12, 0.30}})});
  scan.direction = make_direction({Matrix::from_rows({{1.0, 0.5}, {0.0, 1.0}}),
                                   Matrix::from_rows({{0.0, 1.0}, {1.0, -0.5}})});
  scan.epsilons = {1e-4, 1e-3, 1e-2, 1e-1};
  scan.s_values = {1.0};
  scan.n_max = 12;
  const ScanReport rep = pressure_scan(scan);

  double usc_trend = 0.0;
  for (const auto& [k, v] : rep.summary)
    if (k == "usc_trend_ok") usc_trend = v;

  double prev = -1.0;
  double delta_small = -1.0;
  for (const auto& row : rep.rows) {
    const double eps = row[0], delta = row[5];
    if (eps == 0.0) continue;
    if (eps == 1e-4) delta_small = delta;
    if (!(delta > prev)) {
      detail = "|dP| not strictly monotone at eps = " + sci(eps);
      return false;
    }
    prev = delta;
  }
  detail = "|dP| at eps=1e-4 is " + sci(delta_small) + ", usc trend " + sci(usc_trend);
  return delta_small >= 0.0 && delta_small <= 1e-2 && usc_trend == 1.0;
}

// 11. Legendre spectrum: constant family pins (alpha, h) = (-log 2, log 2);
//     the (1/2, 1/4) family matches the analytic transform of
//     M(q) = log(2^-q + 4^-q) on a 50-point grid over [1/2, 3].
bool crit_legendre(std::string& detail) {
  std::vector<double> grid(50);
  for (int i = 0; i < 50; ++i) grid[static_cast<size_t>(i)] = 0.5 + 2.5 * i / 49.0;

  const LegendreSpectrum eq = legendre_spectrum(scalar_spec({0.5, 0.5}), grid, 8);
  double worst_eq = 0.0;
  for (const LegendrePoint& p : eq.points) {
    worst_eq = std::max(worst_eq, std::fabs(p.alpha + std::log(2.0)));
    worst_eq = std::max(worst_eq, std::fabs(p.h - std::log(2.0)));
  }
  if (worst_eq > 1e-8) {
    detail = "constant family error " + sci(worst_eq);
    return false;
  }

  const LegendreSpectrum two = legendre_spectrum(scalar_spec({0.5, 0.25}), grid, 8);
  double worst = 0.0;
  for (const LegendrePoint& p : two.points) {
    const double w2 = std::pow(2.0, -p.q), w4 = std::pow(4.0, -p.q);
    const double alpha_true = -(w2 * std::log(2.0) + w4 * std::log(4.0)) / (w2 + w4);
    const double h_true = std::log(w2 + w4) - alpha_true * p.q;
    worst = std::max(worst, std::fabs(p.alpha - alpha_true));
    worst = std::max(worst, std::fabs(p.h - h_true));
  }
  detail = "worst (alpha, h) error = " + sci(worst);
  return worst <= 1e-4;
}

// 12. Determinism: the CLI produces byte-identical JSON for worker counts
//     1, 4, 8 (and across repeated runs) on pressure and spectrum jobs.
bool crit_determinism(std::string& detail) {
  const auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  const auto run = [](const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return status >= 0 && WIFEXITED(status) && WEXITSTATUS(status) == 0;
  };

  {
    std::ofstream a("acc_det_pressure.json", std::ios::trunc);
    a << R"({"system": {"d": 2, "k": 2,
            "matrices": [[[0.30,0.10],[0.05,0.25]], [[0.25,-0.08],[0.12,0.30]]]},
            "budgets": {"n_max": 10}, "seed": 2024})";
    std::ofstream b("acc_det_spectrum.json", std::ios::trunc);
    b << R"({"system": {"d": 2, "k": 2,
            "matrices": [[[0.5,0.1],[0.0,0.25]], [[0.4,0.0],[0.2,0.3]]]},
            "seed": 77,
            "spectrum": {"horizon": 2000, "trials": 32, "q_grid": [0.5, 1.0, 2.0]}})";
  }

  bool ok = true;
  for (const std::string cmd : {"pressure", "spectrum"}) {
    std::vector<std::string> outputs;
    for (int workers : {1, 4, 8, 4}) {  // repeat workers=4 to cover reruns
      const std::string out =
          "acc_det_" + cmd + "_" + std::to_string(outputs.size()) + ".json";
      const std::string shell = "PRESSURE_LAB_WORKERS=" + std::to_string(workers) + " \"" +
                                PLAB_CLI_PATH + "\" " + cmd + " --config acc_det_" + cmd +
                                ".json --out " + out;
      if (!run(shell)) {
        detail = cmd + " run failed under workers=" + std::to_string(workers);
        ok = false;
        break;
      }
      outputs.push_back(slurp(out));
      std::remove(out.c_str());
    }
    if (!ok) break;
    for (size_t i = 1; i < outputs.size(); ++i) {
      if (outputs[i].empty() || outputs[i] != outputs[0]) {
        detail = cmd + " bytes diverge between runs " + std::to_string(i) + " and 0";
        ok = false;
      }
    }
    if (ok && detail.empty()) detail = "all byte-identical";
  }
  std::remove("acc_det_pressure.json");
  std::remove("acc_det_spectrum.json");
  return ok;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // <= 0: no stated runtime budget
  bool (*fn)(std::string&);
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "scalar pressure level sums hit log(5/6)", 1.0, crit_scalar_exact},
      {2, "Moran dimension matches the bisection oracle", 5.0, crit_moran},
      {3, "diagonal triple matches its closed-form dimension", 30.0, crit_diag_dimension},
      {4, "rank-drop dichotomy and regularized family", 1.0, crit_discontinuity},
      {5, "joint spectral radius golden pair", 60.0, crit_jsr},
      {6, "variational principle on random scalar systems", 5.0, crit_variational},
      {7, "singular value function property sweep", 30.0, crit_svf_properties},
      {8, "expected svf growth matches the exponent formula", 60.0, crit_oseledets},
      {9, "cone contraction and almost-multiplicativity", 60.0, crit_cones},
      {10, "pressure continuity trend under perturbation", 120.0, crit_continuity_trend},
      {11, "Legendre spectrum against the analytic transform", 10.0, crit_legendre},
      {12, "byte-identical reports across worker counts", 0.0, crit_determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && c.limit_s > 0.0 && elapsed > c.limit_s) {
      ok = false;
      detail = "exceeded the " + sci(c.limit_s) + "s budget";
    }
    if (!ok) ++failures;
    std::printf("%s %2d %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", c.id, c.name, elapsed,
                detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 12 criteria passed\n", 12 - failures);
  return failures;
}
