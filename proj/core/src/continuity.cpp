#include "plab/continuity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "plab/errors.hpp"

namespace plab {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_grid(const std::vector<double>& xs, const char* what, bool positive) {
  if (xs.empty()) throw ValidationError(std::string(what) + " grid is empty");
  for (size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i])) throw ValidationError(std::string(what) + " grid must be finite");
    if (positive && !(xs[i] > 0.0))
      throw ValidationError(std::string(what) + " grid must be positive");
    if (i > 0 && !(xs[i] > xs[i - 1]))
      throw ValidationError(std::string(what) + " grid must be strictly ascending");
  }
}

double stacked_frobenius(const std::vector<Matrix>& ms) {
  double s = 0.0;
  for (const Matrix& m : ms) {
    const double f = frobenius_norm(m);
    s += f * f;
  }
  return std::sqrt(s);
}

void check_direction(const CocycleSpec& base, const std::vector<Matrix>& dir) {
  if (static_cast<int>(dir.size()) != base.k())
    throw ValidationError("direction needs one matrix per symbol");
  for (const Matrix& m : dir)
    if (m.dim() != base.dim()) throw ValidationError("direction dimension mismatch");
  if (std::fabs(stacked_frobenius(dir) - 1.0) > 1e-6)
    throw ValidationError("direction must have unit stacked Frobenius norm");
}

// Lipschitz constant in s for an invertible tuple: max(|log C|, |log D|)
double s_lipschitz_constant(const CocycleSpec& spec) {
  double c = 0.0, d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < spec.k(); ++i) {
    c = std::max(c, spec.op_norms[static_cast<size_t>(i)]);
    d = std::min(d, spec.min_singulars[static_cast<size_t>(i)]);
  }
  if (!(d > 0.0)) return std::numeric_limits<double>::infinity();
  return std::max(std::fabs(std::log(c)), std::fabs(std::log(d)));
}

// distance between pressure brackets; 0 when they overlap
double bracket_distance(const PressureEstimate& a, const PressureEstimate& b) {
  if (a.upper == kNegInf && b.upper == kNegInf) return 0.0;
  double gap = 0.0;
  if (a.lower != kNegInf) gap = std::max(gap, a.lower - b.upper);
  if (b.lower != kNegInf) gap = std::max(gap, b.lower - a.upper);
  return gap;
}

}  // namespace

std::vector<Matrix> make_direction(std::vector<Matrix> raw) {
  if (raw.empty()) throw ValidationError("direction needs at least one matrix");
  const int d = raw[0].dim();
  for (const Matrix& m : raw) {
    if (m.dim() != d) throw ValidationError("direction matrices must share one dimension");
    if (!m.all_finite()) throw ValidationError("direction entries must be finite");
  }
  const double f = stacked_frobenius(raw);
  if (!(f > 0.0)) throw ValidationError("direction must be nonzero");
  for (Matrix& m : raw) m *= 1.0 / f;
  return raw;
}

CocycleSpec perturb(const CocycleSpec& base, const std::vector<Matrix>& direction, double eps) {
  check_direction(base, direction);
  if (!std::isfinite(eps)) throw ValidationError("perturbation size must be finite");
  std::vector<Matrix> ms = base.matrices;
  for (size_t i = 0; i < ms.size(); ++i) {
    Matrix step = direction[i];
    step *= eps;
    ms[i] += step;
  }
  return CocycleSpec::make(base.sft, std::move(ms), base.potential);
}

ScanReport pressure_scan(const PerturbationScan& scan) {
  check_grid(scan.epsilons, "epsilon", true);
  check_grid(scan.s_values, "s", false);
  check_direction(scan.base, scan.direction);
  for (double s : scan.s_values)
    if (!(s >= 0.0)) throw ValidationError("s grid must be nonnegative");

  ScanReport rep;
  rep.kind = "pressure_scan";
  rep.columns = {"epsilon", "s", "p_lower", "p_point", "p_upper", "abs_delta_point",
                 "usc_gap"};

  const size_t ns = scan.s_values.size();
  std::vector<double> base_point(ns, kNaN), base_upper(ns, kNaN);
  // g(eps) = worst positive upper-bound gap over s; tracks fixed-n upper
  // semicontinuity along the grid
  std::vector<double> eps_gap(scan.epsilons.size(), kNaN);

  std::vector<double> all_eps;
  all_eps.push_back(0.0);
  all_eps.insert(all_eps.end(), scan.epsilons.begin(), scan.epsilons.end());

  for (size_t ei = 0; ei < all_eps.size(); ++ei) {
    const double eps = all_eps[ei];
    bool engine_ok = true;
    std::string spec_note;
    PressureEngine* engine = nullptr;
    std::optional<PressureEngine> storage;
    try {
      storage.emplace(eps == 0.0 ? scan.base : perturb(scan.base, scan.direction, eps),
                      scan.budgets);
      engine = &*storage;
    } catch (const Error& e) {
      engine_ok = false;
      spec_note = e.what();
    }
    double worst_gap = 0.0;
    bool row_failed = false;
    for (size_t si = 0; si < ns; ++si) {
      const double s = scan.s_values[si];
      std::vector<double> row{eps, s, kNaN, kNaN, kNaN, kNaN, kNaN};
      std::string note = spec_note;
      if (engine_ok) {
        try {
          const PressureEstimate est =
              engine->estimate(Exponent::scalar(s), PressureMode::svf, scan.n_max);
          row[2] = est.lower;
          row[3] = est.point;
          row[4] = est.upper;
          if (eps == 0.0) {
            base_point[si] = est.point;
            base_upper[si] = est.upper;
            row[5] = 0.0;
            row[6] = 0.0;
          } else {
            row[5] = std::fabs(est.point - base_point[si]);
            row[6] = est.upper - base_upper[si];
            if (est.upper == kNegInf && base_upper[si] == kNegInf) row[6] = 0.0;
            worst_gap = std::max(worst_gap, std::max(row[6], 0.0));
          }
        } catch (const Error& e) {
          note = e.what();
          row_failed = true;
        }
      } else {
        row_failed = true;
      }
      rep.rows.push_back(std::move(row));
      rep.row_notes.push_back(std::move(note));
    }
    if (ei > 0 && !row_failed) eps_gap[ei - 1] = worst_gap;
  }

  // upper semicontinuity on the grid: gaps shrink with eps and end small
  bool trend_ok = true;
  double final_gap = kNaN;
  for (size_t i = 0; i < eps_gap.size(); ++i) {
    if (std::isnan(eps_gap[i])) {
      trend_ok = false;
      break;
    }
    if (i > 0 && eps_gap[i - 1] > eps_gap[i] + 1e-12) trend_ok = false;
  }
  if (!eps_gap.empty() && !std::isnan(eps_gap[0])) final_gap = eps_gap[0];
  rep.summary.emplace_back("usc_trend_ok", trend_ok ? 1.0 : 0.0);
  rep.summary.emplace_back("usc_final_gap", final_gap);
  rep.summary.emplace_back("n_max", static_cast<double>(scan.n_max));
  return rep;
}

ScanReport dimension_scan(const PerturbationScan& scan) {
  check_grid(scan.epsilons, "epsilon", true);
  check_direction(scan.base, scan.direction);
  if (!scan.base.contractive)
    throw ValidationError("dimension scan needs a contractive base cocycle");

  ScanReport rep;
  rep.kind = "dimension_scan";
  rep.columns = {"epsilon", "s_lower", "s_upper", "s_point", "abs_delta_point",
                 "norm_warning"};

  double base_point = kNaN;
  double max_delta = 0.0;
  bool all_ok = true;

  std::vector<double> all_eps;
  all_eps.push_back(0.0);
  all_eps.insert(all_eps.end(), scan.epsilons.begin(), scan.epsilons.end());

  for (double eps : all_eps) {
    std::vector<double> row{eps, kNaN, kNaN, kNaN, kNaN, kNaN};
    std::string note;
    try {
      const CocycleSpec spec =
          eps == 0.0 ? scan.base : perturb(scan.base, scan.direction, eps);
      if (!spec.contractive) {
        note = "skipped: perturbed cocycle is not contractive";
        all_ok = false;
      } else {
        const DimensionResult res =
            singularity_dimension(spec, scan.dimension_tol, scan.n_max, scan.budgets);
        const double mid = 0.5 * (res.s_lower + res.s_upper);
        row[1] = res.s_lower;
        row[2] = res.s_upper;
        row[3] = mid;
        if (eps == 0.0) {
          base_point = mid;
          row[4] = 0.0;
        } else {
          row[4] = std::fabs(mid - base_point);
          max_delta = std::max(max_delta, row[4]);
        }
        row[5] = res.norm_warning ? 1.0 : 0.0;
      }
    } catch (const Error& e) {
      note = e.what();
      all_ok = false;
    }
    rep.rows.push_back(std::move(row));
    rep.row_notes.push_back(std::move(note));
  }
  rep.summary.emplace_back("max_abs_delta", max_delta);
  rep.summary.emplace_back("all_rows_ok", all_ok ? 1.0 : 0.0);
  rep.summary.emplace_back("n_max", static_cast<double>(scan.n_max));
  return rep;
}

ScanReport joint_continuity_scan(const CocycleSpec& spec, const std::vector<Matrix>& direction,
                                 const std::vector<double>& s_grid, double eps, int n_max,
                                 const Budgets& budgets) {
  if (!spec.all_invertible)
    throw ValidationError("joint scan needs an invertible cocycle");
  check_direction(spec, direction);
  check_grid(s_grid, "s", false);
  for (double s : s_grid)
    if (!(s >= 0.0)) throw ValidationError("s grid must be nonnegative");
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw ValidationError("perturbation size must be positive and finite");

  ScanReport rep;
  rep.kind = "joint_scan";
  rep.columns = {"magnitude",       "s",          "p_lower", "p_point", "p_upper",
                 "delta_vs_prev_s", "pair_bound", "within_bound"};

  const double mags[4] = {0.0, eps / 4.0, eps / 2.0, eps};
  bool all_ok = true;
  double base_constant = kNaN;

  for (double mag : mags) {
    std::string spec_note;
    std::optional<PressureEngine> engine;
    double constant = kNaN;
    try {
      CocycleSpec pert = mag == 0.0 ? spec : perturb(spec, direction, mag);
      if (!pert.all_invertible) {
        spec_note = "skipped: perturbed cocycle lost invertibility";
        all_ok = false;
      } else {
        constant = s_lipschitz_constant(pert);
        if (mag == 0.0) base_constant = constant;
        engine.emplace(std::move(pert), budgets);
      }
    } catch (const Error& e) {
      spec_note = e.what();
      all_ok = false;
    }

    bool have_prev = false;
    PressureEstimate prev;
    double prev_s = 0.0;
    for (double s : s_grid) {
      std::vector<double> row{mag, s, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN};
      std::string note = spec_note;
      if (engine) {
        try {
          const PressureEstimate est =
              engine->estimate(Exponent::scalar(s), PressureMode::svf, n_max);
          row[2] = est.lower;
          row[3] = est.point;
          row[4] = est.upper;
          if (have_prev) {
            row[5] = est.point - prev.point;
            row[6] = (s - prev_s) * constant;
            const bool within = bracket_distance(est, prev) <= row[6] + 1e-9;
            row[7] = within ? 1.0 : 0.0;
            if (!within) all_ok = false;
          }
          prev = est;
          prev_s = s;
          have_prev = true;
        } catch (const Error& e) {
          note = e.what();
          all_ok = false;
          have_prev = false;
        }
      }
      rep.rows.push_back(std::move(row));
      rep.row_notes.push_back(std::move(note));
    }
  }
  rep.summary.emplace_back("all_bounds_ok", all_ok ? 1.0 : 0.0);
  rep.summary.emplace_back("bound_constant_base", base_constant);
  rep.summary.emplace_back("n_max", static_cast<double>(n_max));
  return rep;
}

ScanReport discontinuity_demo() {
  const Matrix a = Matrix::from_rows({{0.5, 0.0}, {0.0, 0.0}});
  const CocycleSpec base = CocycleSpec::make(Sft::full_shift(2), {a, a});
  const int n_max = 6;

  ScanReport rep;
  rep.kind = "discontinuity_demo";
  rep.columns = {"s", "delta", "p_point", "closed_form", "abs_error"};

  PressureEngine engine(base);
  bool dichotomy = true;

  const PressureEstimate at_one = engine.estimate(Exponent::scalar(1.0), PressureMode::svf, n_max);
  const double finite_err = std::fabs(at_one.point);
  if (at_one.point == kNegInf) dichotomy = false;
  rep.rows.push_back({1.0, 0.0, at_one.point, 0.0, finite_err});
  rep.row_notes.emplace_back();

  for (double t : {1.01, 1.5, 2.0}) {
    const PressureEstimate est = engine.estimate(Exponent::scalar(t), PressureMode::svf, n_max);
    // rank drop forces every level sum to an exact -inf; no tolerance here
    if (est.point != kNegInf || est.upper != kNegInf) dichotomy = false;
    rep.rows.push_back({t, 0.0, est.point, kNegInf, est.point == kNegInf ? 0.0 : kNaN});
    rep.row_notes.emplace_back();
  }

  double closed_form_max_err = 0.0;
  double prev_point = std::numeric_limits<double>::infinity();
  bool walks_down = true;
  for (double delta : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const Matrix ad = Matrix::from_rows({{0.5, 0.0}, {0.0, delta}});
    PressureEngine pe(CocycleSpec::make(Sft::full_shift(2), {ad, ad}));
    const PressureEstimate est = pe.estimate(Exponent::scalar(1.5), PressureMode::svf, n_max);
    const double closed = std::log(2.0) + std::log(0.5) + 0.5 * std::log(delta);
    const double err = std::fabs(est.point - closed);
    closed_form_max_err = std::max(closed_form_max_err, err);
    if (!(est.point < prev_point)) walks_down = false;
    prev_point = est.point;
    rep.rows.push_back({1.5, delta, est.point, closed, err});
    rep.row_notes.emplace_back();
  }

  rep.summary.emplace_back("dichotomy_exact", dichotomy ? 1.0 : 0.0);
  rep.summary.emplace_back("finite_value_abs_err", finite_err);
  rep.summary.emplace_back("closed_form_max_err", closed_form_max_err);
  rep.summary.emplace_back("walks_to_neg_inf", walks_down ? 1.0 : 0.0);
  return rep;
}

}  // namespace plab
