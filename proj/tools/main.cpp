#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "plab/cones.hpp"
#include "plab/config.hpp"
#include "plab/continuity.hpp"
#include "plab/dimension.hpp"
#include "plab/errors.hpp"
#include "plab/pressure.hpp"
#include "plab/report.hpp"
#include "plab/spectrum.hpp"
#include "verify.hpp"

namespace {

using namespace plab;

struct CliArgs {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<double> s;
  std::vector<double> s_vec;
  std::optional<int> n_max;
  std::optional<uint64_t> seed;
  std::string suite = "all";  // verify only
};

void add_common_flags(CLI::App* sub, CliArgs& args, bool config_required) {
  auto* cfg = sub->add_option("--config", args.config_path, "run configuration file (JSON)");
  if (config_required) cfg->required();
  sub->add_option("--out", args.out, "report path (default: config output.path, else stdout)");
  sub->add_option("--format", args.format, "report format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--s", args.s, "scalar exponent");
  sub->add_option("--s-vec", args.s_vec, "singular-value weight vector (nonincreasing)");
  sub->add_option("--n-max", args.n_max, "level cap override");
  sub->add_option("--seed", args.seed, "seed override");
}

RunConfig resolve_config(const CliArgs& args) {
  RunConfig cfg = load_config(args.config_path);
  if (args.out) cfg.out_path = *args.out;
  if (args.format) cfg.format = (*args.format == "csv") ? ReportFormat::csv : ReportFormat::json;
  if (args.n_max) {
    if (*args.n_max < 1 || *args.n_max > 64)
      throw ValidationError("--n-max must be in [1, 64]");
    cfg.budgets.n_max = *args.n_max;
  }
  if (args.seed) cfg.seed = *args.seed;
  if (const char* env = std::getenv("PRESSURE_LAB_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long w = std::strtol(env, &end, 10);
    if (end == nullptr || *end != '\0' || w < 1 || w > 256)
      throw ValidationError("PRESSURE_LAB_WORKERS must be an integer in [1, 256]");
    cfg.budgets.workers = static_cast<int>(w);
  }
  return cfg;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int emit(const RunConfig& cfg, const std::string& command, const CommandResult& result) {
  write_report(cfg, render_report(cfg, command, result));
  return 0;
}

int cmd_pressure(const CliArgs& args) {
  const RunConfig cfg = resolve_config(args);
  Exponent e = Exponent::scalar(1.0);
  std::string label = "s=1";
  if (!args.s_vec.empty()) {
    if (args.s) throw ValidationError("--s and --s-vec are mutually exclusive");
    e = Exponent::flags(args.s_vec);
    label = "flags=[";
    for (size_t i = 0; i < args.s_vec.size(); ++i)
      label += (i ? "," : "") + fmt17(args.s_vec[i]);
    label += "]";
  } else if (args.s) {
    e = Exponent::scalar(*args.s);
    label = "s=" + fmt17(*args.s);
  }
  PressureCommandResult res{label,
                            pressure_estimate(cfg.system, e, cfg.budgets.n_max, cfg.budgets)};
  return emit(cfg, "pressure", CommandResult{std::move(res)});
}

int cmd_dimension(const CliArgs& args) {
  const RunConfig cfg = resolve_config(args);
  DimensionResult res =
      singularity_dimension(cfg.system, cfg.dimension_tol, cfg.budgets.n_max, cfg.budgets);
  if (res.norm_warning)
    std::cerr << "warning: some generator norms are >= 1/2; the almost-sure dimension "
                 "formula's hypothesis fails (the value itself is still well defined)\n";
  return emit(cfg, "dimension", CommandResult{std::move(res)});
}

int cmd_jsr(const CliArgs& args) {
  const RunConfig cfg = resolve_config(args);
  const double s_large = args.s ? *args.s : 64.0;
  JsrResult res = jsr_estimate(cfg.system.matrices, cfg.budgets.n_max, s_large, cfg.budgets);
  return emit(cfg, "jsr", CommandResult{std::move(res)});
}

int cmd_spectrum(const CliArgs& args) {
  const RunConfig cfg = resolve_config(args);
  const SpectrumConfig sc =
      cfg.spectrum ? *cfg.spectrum : default_spectrum_config(cfg.system);
  SpectrumCommandResult res;
  res.lyapunov = lyapunov_spectrum(cfg.system, sc.measure, sc.horizon, sc.trials, cfg.seed,
                                   sc.cluster_gap, cfg.budgets.workers);
  for (int s = 1; s <= cfg.system.dim(); ++s) {
    const MonteCarloEstimate mc = expected_svf_rate(cfg.system, sc.measure, s, sc.horizon,
                                                    sc.trials, cfg.seed, cfg.budgets.workers);
    res.rates.push_back({static_cast<double>(s), mc.value, mc.std_error,
                         svf_rate_from_exponents(res.lyapunov, s)});
  }
  if (!sc.q_grid.empty())
    res.legendre = legendre_spectrum(cfg.system, sc.q_grid, cfg.budgets.n_max, cfg.budgets);
  return emit(cfg, "spectrum", CommandResult{std::move(res)});
}

int cmd_continuity(const CliArgs& args) {
  const RunConfig cfg = resolve_config(args);
  if (!cfg.continuity)
    throw ValidationError("the continuity command needs a 'continuity' config section");
  const ContinuityConfig& cc = *cfg.continuity;
  ScanReport res;
  if (cc.kind == "discontinuity") {
    res = discontinuity_demo();
  } else if (cc.kind == "joint") {
    res = joint_continuity_scan(cfg.system, cc.direction, cc.s_values, cc.epsilons.back(),
                                cfg.budgets.n_max, cfg.budgets);
  } else {
    PerturbationScan scan;
    scan.base = cfg.system;
    scan.direction = cc.direction;
    scan.epsilons = cc.epsilons;
    scan.s_values = cc.s_values;
    scan.n_max = cfg.budgets.n_max;
    scan.dimension_tol = cfg.dimension_tol;
    scan.budgets = cfg.budgets;
    res = (cc.kind == "dimension") ? dimension_scan(scan) : pressure_scan(scan);
  }
  return emit(cfg, "continuity", CommandResult{std::move(res)});
}

int cmd_cones(const CliArgs& args) {
  const RunConfig cfg = resolve_config(args);
  const ConesConfig cc = cfg.cones ? *cfg.cones : default_cones_config(cfg.system);
  const Cone k_in = Cone::around(cc.axis, cc.aperture_in);
  const Cone k_out = Cone::around(cc.axis, cc.aperture_out);
  ConesCommandResult res;
  res.axis = k_in.axis;
  res.aperture_in = cc.aperture_in;
  res.aperture_out = cc.aperture_out;
  res.all_hold = true;
  for (const Matrix& m : cfg.system.matrices) {
    res.certificates.push_back(maps_cone_into(m, k_in, k_out, cc.samples));
    res.all_hold = res.all_hold && res.certificates.back().holds;
  }
  res.almost_mult = res.all_hold ? almost_mult_constant(cfg.system.matrices, k_in, k_out)
                                 : std::numeric_limits<double>::quiet_NaN();
  return emit(cfg, "cones", CommandResult{std::move(res)});
}

int cmd_verify(const CliArgs& args) {
  const VerifyCommandResult res = tools::run_verify_suite(args.suite);
  for (const auto& c : res.checks) {
    if (c.passed)
      std::cout << "PASS " << c.name << "\n";
    else
      std::cout << "FAIL " << c.name << ": " << c.detail << "\n";
  }
  if (!args.config_path.empty()) {
    const RunConfig cfg = resolve_config(args);
    write_report(cfg, render_report(cfg, "verify", CommandResult{res}));
  } else if (args.out || args.format) {
    throw ValidationError("verify report output needs --config for the embedded config");
  }
  return res.all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matrix-cocycle pressure toolbox"};
  app.require_subcommand(1);

  CliArgs args;
  auto* p = app.add_subcommand("pressure", "sub-additive pressure bracket at one exponent");
  add_common_flags(p, args, true);
  auto* d = app.add_subcommand("dimension", "singularity dimension by pressure bisection");
  add_common_flags(d, args, true);
  auto* j = app.add_subcommand("jsr", "joint spectral radius bracket");
  add_common_flags(j, args, true);
  auto* sp = app.add_subcommand("spectrum", "Lyapunov spectrum and Legendre transform");
  add_common_flags(sp, args, true);
  auto* co = app.add_subcommand("continuity", "perturbation scans");
  add_common_flags(co, args, true);
  auto* cn = app.add_subcommand("cones", "cone-mapping certificates");
  add_common_flags(cn, args, true);
  auto* v = app.add_subcommand("verify", "property suites (svf, cones, all)");
  add_common_flags(v, args, false);
  v->add_option("suite", args.suite, "suite name (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (p->parsed()) return cmd_pressure(args);
    if (d->parsed()) return cmd_dimension(args);
    if (j->parsed()) return cmd_jsr(args);
    if (sp->parsed()) return cmd_spectrum(args);
    if (co->parsed()) return cmd_continuity(args);
    if (cn->parsed()) return cmd_cones(args);
    if (v->parsed()) return cmd_verify(args);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget error (" << e.config_key() << "): " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
