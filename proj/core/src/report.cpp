#include "plab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>

#include "json.hpp"
#include "plab/errors.hpp"

namespace plab {

namespace {

using ojson = nlohmann::ordered_json;

// non-finite doubles have no JSON encoding (nlohmann would emit null)
ojson num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  return v;
}

ojson num_array(const std::vector<double>& xs) {
  ojson a = ojson::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

ojson int_array(const std::vector<int>& xs) {
  ojson a = ojson::array();
  for (int x : xs) a.push_back(x);
  return a;
}

ojson matrix_json(const Matrix& m) {
  ojson rows = ojson::array();
  for (int i = 0; i < m.dim(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(num(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ojson matrices_json(const std::vector<Matrix>& ms) {
  ojson a = ojson::array();
  for (const Matrix& m : ms) a.push_back(matrix_json(m));
  return a;
}

ojson measure_json(const MarkovMeasure& mu) {
  ojson j;
  j["initial"] = num_array(mu.initial);
  ojson kernel = ojson::array();
  const int k = mu.k();
  for (int r = 0; r < k; ++r) {
    ojson row = ojson::array();
    for (int c = 0; c < k; ++c) row.push_back(num(mu.kernel_at(r, c)));
    kernel.push_back(std::move(row));
  }
  j["kernel"] = std::move(kernel);
  return j;
}

// resolved config; workers and the output destination/format are left out
// deliberately (results never depend on them, and flags may override them)
ojson config_json(const RunConfig& cfg) {
  ojson j;
  ojson sys;
  sys["d"] = cfg.system.dim();
  sys["k"] = cfg.system.k();
  ojson trans = ojson::array();
  for (int i = 0; i < cfg.system.k(); ++i) {
    ojson row = ojson::array();
    for (int c = 0; c < cfg.system.k(); ++c) row.push_back(cfg.system.sft.allowed(i, c) ? 1 : 0);
    trans.push_back(std::move(row));
  }
  sys["transitions"] = std::move(trans);
  sys["matrices"] = matrices_json(cfg.system.matrices);
  sys["potential"] = num_array(cfg.system.potential);
  j["system"] = std::move(sys);

  ojson budgets;
  budgets["n_max"] = cfg.budgets.n_max;
  budgets["word_budget"] = cfg.budgets.word_budget;
  budgets["cache_bytes"] = cfg.budgets.cache_bytes;
  j["budgets"] = std::move(budgets);

  j["seed"] = cfg.seed;
  ojson tol;
  tol["dimension_tol"] = num(cfg.dimension_tol);
  tol["bracket_slack"] = num(cfg.bracket_slack);
  j["tolerances"] = std::move(tol);

  if (cfg.spectrum) {
    ojson s;
    s["measure"] = measure_json(cfg.spectrum->measure);
    s["horizon"] = cfg.spectrum->horizon;
    s["trials"] = cfg.spectrum->trials;
    s["cluster_gap"] = num(cfg.spectrum->cluster_gap);
    s["q_grid"] = num_array(cfg.spectrum->q_grid);
    j["spectrum"] = std::move(s);
  }
  if (cfg.continuity) {
    ojson c;
    c["kind"] = cfg.continuity->kind;
    c["direction"] = matrices_json(cfg.continuity->direction);
    c["epsilons"] = num_array(cfg.continuity->epsilons);
    c["s_values"] = num_array(cfg.continuity->s_values);
    j["continuity"] = std::move(c);
  }
  if (cfg.cones) {
    ojson c;
    c["axis"] = num_array(cfg.cones->axis);
    c["aperture_in"] = num(cfg.cones->aperture_in);
    c["aperture_out"] = num(cfg.cones->aperture_out);
    c["samples"] = cfg.cones->samples;
    j["cones"] = std::move(c);
  }
  return j;
}

ojson result_json(const PressureCommandResult& r) {
  ojson j;
  j["label"] = r.label;
  j["lower"] = num(r.estimate.lower);
  j["upper"] = num(r.estimate.upper);
  j["point"] = num(r.estimate.point);
  j["mode"] = r.estimate.mode == PressureMode::svf ? "svf" : "norm";
  j["determinant_route"] = r.estimate.determinant_route;
  j["lower_clamped"] = r.estimate.lower_clamped;
  j["junction_applicable"] = r.estimate.junction_applicable;
  ojson levels = ojson::array();
  for (const LevelPoint& p : r.estimate.levels) {
    ojson lp;
    lp["n"] = p.n;
    lp["value"] = num(p.value);
    levels.push_back(std::move(lp));
  }
  j["levels"] = std::move(levels);
  return j;
}

ojson result_json(const DimensionResult& r) {
  ojson j;
  j["s_lower"] = num(r.s_lower);
  j["s_upper"] = num(r.s_upper);
  j["affinity_lower"] = num(r.affinity_lower);
  j["affinity_upper"] = num(r.affinity_upper);
  j["iterations"] = r.iterations;
  j["norm_warning"] = r.norm_warning;
  j["budget_limited"] = r.budget_limited;
  j["certified_lower"] = num(r.certified_lower);
  j["certified_upper"] = num(r.certified_upper);
  ojson audit = ojson::array();
  for (const DimensionAuditRow& row : r.audit) {
    ojson a;
    a["s"] = num(row.s);
    a["p_lower"] = num(row.lower);
    a["p_point"] = num(row.point);
    a["p_upper"] = num(row.upper);
    audit.push_back(std::move(a));
  }
  j["audit"] = std::move(audit);
  return j;
}

ojson result_json(const JsrResult& r) {
  ojson j;
  j["lower"] = num(r.lower);
  j["upper"] = num(r.upper);
  j["pressure_based"] = num(r.pressure_based);
  j["pressure_adjusted"] = num(r.pressure_adjusted);
  j["band_lower"] = num(r.band_lower);
  j["band_upper"] = num(r.band_upper);
  j["n"] = r.n;
  j["s_large"] = num(r.s_large);
  return j;
}

ojson result_json(const SpectrumCommandResult& r) {
  ojson j;
  j["exponents"] = num_array(r.lyapunov.exponents);
  j["multiplicities"] = int_array(r.lyapunov.multiplicities);
  j["std_errors"] = num_array(r.lyapunov.std_errors);
  j["t_cum"] = int_array(r.lyapunov.t_cum);
  j["gamma"] = num_array(r.lyapunov.gamma);
  j["raw_rates"] = num_array(r.lyapunov.raw_rates);
  j["raw_std_errors"] = num_array(r.lyapunov.raw_std_errors);
  j["trials"] = r.lyapunov.trials;
  j["horizon"] = r.lyapunov.horizon;
  j["cluster_gap"] = num(r.lyapunov.cluster_gap);
  ojson rates = ojson::array();
  for (const SpectrumRateRow& row : r.rates) {
    ojson a;
    a["s"] = num(row.s);
    a["sampled"] = num(row.sampled);
    a["std_error"] = num(row.std_error);
    a["predicted"] = num(row.predicted);
    rates.push_back(std::move(a));
  }
  j["rates"] = std::move(rates);
  if (r.legendre) {
    ojson l;
    ojson pts = ojson::array();
    for (const LegendrePoint& p : r.legendre->points) {
      ojson a;
      a["q"] = num(p.q);
      a["m"] = num(p.m);
      a["alpha"] = num(p.alpha);
      a["h"] = num(p.h);
      pts.push_back(std::move(a));
    }
    l["points"] = std::move(pts);
    l["concave_ok"] = r.legendre->concave_ok;
    l["admissible"] = r.legendre->admissible;
    l["kink_flags"] = int_array(r.legendre->kink_flags);
    j["legendre"] = std::move(l);
  } else {
    j["legendre"] = nullptr;
  }
  return j;
}

ojson result_json(const ScanReport& r) {
  ojson j;
  j["kind"] = r.kind;
  ojson cols = ojson::array();
  for (const std::string& c : r.columns) cols.push_back(c);
  j["columns"] = std::move(cols);
  ojson rows = ojson::array();
  for (const auto& row : r.rows) rows.push_back(num_array(row));
  j["rows"] = std::move(rows);
  ojson notes = ojson::array();
  for (const std::string& n : r.row_notes) notes.push_back(n);
  j["row_notes"] = std::move(notes);
  ojson summary;
  for (const auto& [k, v] : r.summary) summary[k] = num(v);
  j["summary"] = std::move(summary);
  return j;
}

ojson result_json(const ConesCommandResult& r) {
  ojson j;
  j["axis"] = num_array(r.axis);
  j["aperture_in"] = num(r.aperture_in);
  j["aperture_out"] = num(r.aperture_out);
  ojson certs = ojson::array();
  for (const ConeMapCertificate& c : r.certificates) {
    ojson a;
    a["holds"] = c.holds;
    a["margin"] = num(c.margin);
    a["samples"] = c.samples;
    certs.push_back(std::move(a));
  }
  j["certificates"] = std::move(certs);
  j["all_hold"] = r.all_hold;
  j["almost_mult"] = num(r.almost_mult);
  return j;
}

ojson result_json(const VerifyCommandResult& r) {
  ojson j;
  j["suite"] = r.suite;
  ojson checks = ojson::array();
  for (const VerifyCheck& c : r.checks) {
    ojson a;
    a["name"] = c.name;
    a["passed"] = c.passed;
    a["detail"] = c.detail;
    checks.push_back(std::move(a));
  }
  j["checks"] = std::move(checks);
  j["all_passed"] = r.all_passed;
  return j;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_leaf(const ojson& j) {
  if (j.is_string()) return csv_escape(j.get<std::string>());
  if (j.is_boolean()) return j.get<bool>() ? "1" : "0";
  if (j.is_number_unsigned()) return std::to_string(j.get<uint64_t>());
  if (j.is_number_integer()) return std::to_string(j.get<int64_t>());
  if (j.is_number_float()) return format_number(j.get<double>());
  if (j.is_null()) return "";
  return csv_escape(j.dump());
}

void flatten(const ojson& j, const std::string& path, std::string& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
  } else if (j.is_array()) {
    for (size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "." + std::to_string(i), out);
  } else {
    out += csv_escape(path);
    out += ',';
    out += csv_leaf(j);
    out += '\n';
  }
}

std::string scan_csv(const ScanReport& r) {
  std::string out;
  for (size_t i = 0; i < r.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(r.columns[i]);
  }
  out += ",note\n";
  for (size_t i = 0; i < r.rows.size(); ++i) {
    for (size_t c = 0; c < r.rows[i].size(); ++c) {
      if (c) out += ',';
      out += format_number(r.rows[i][c]);
    }
    out += ',';
    out += csv_escape(i < r.row_notes.size() ? r.row_notes[i] : std::string());
    out += '\n';
  }
  // summary scalars appended as their own key,value block
  for (const auto& [k, v] : r.summary) {
    out += csv_escape("summary." + k);
    out += ',';
    out += format_number(v);
    out += '\n';
  }
  return out;
}

}  // namespace

std::string render_report(const RunConfig& cfg, const std::string& command,
                          const CommandResult& result) {
  const ojson res = std::visit([](const auto& r) { return result_json(r); }, result);
  if (cfg.format == ReportFormat::csv) {
    if (const ScanReport* scan = std::get_if<ScanReport>(&result)) return scan_csv(*scan);
    std::string out = "key,value\n";
    flatten(res, "", out);
    return out;
  }
  ojson envelope;
  envelope["schema"] = "pressure-lab/report/v1";
  envelope["command"] = command;
  envelope["config"] = config_json(cfg);
  envelope["result"] = res;
  return envelope.dump(2) + "\n";
}

void write_report(const RunConfig& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(cfg.out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open report path: " + cfg.out_path);
  out << text;
  if (!out) throw Error("failed writing report to " + cfg.out_path);
}

}  // namespace plab
