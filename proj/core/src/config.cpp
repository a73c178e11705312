#include "plab/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>

#include "json.hpp"
#include "plab/continuity.hpp"
#include "plab/errors.hpp"

namespace plab {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ValidationError("config field '" + path + "': " + msg);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "must be an object");
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) throw ValidationError("unknown config key '" + join(path, it.key()) + "'");
  }
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

int64_t as_integer(const json& j, const std::string& path, int64_t lo, int64_t hi) {
  if (!j.is_number_integer()) fail(path, "must be an integer");
  const int64_t v = j.get<int64_t>();
  if (v < lo || v > hi)
    fail(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

uint64_t as_u64(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<uint64_t>();
  if (j.is_number_integer() && j.get<int64_t>() >= 0)
    return static_cast<uint64_t>(j.get<int64_t>());
  fail(path, "must be a nonnegative integer");
}

std::vector<double> as_number_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "must be an array of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> ascending_positive(const json& j, const std::string& path) {
  auto xs = as_number_array(j, path);
  for (size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0)) fail(path, "entries must be positive");
    if (i > 0 && !(xs[i] > xs[i - 1])) fail(path, "entries must be strictly ascending");
  }
  return xs;
}

Matrix as_matrix(const json& j, const std::string& path, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d)
    fail(path, "must be an array of " + std::to_string(d) + " rows");
  Matrix m(d);
  for (int r = 0; r < d; ++r) {
    const json& row = j[static_cast<size_t>(r)];
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      fail(rp, "must be an array of " + std::to_string(d) + " numbers");
    for (int c = 0; c < d; ++c)
      m(r, c) = as_number(row[static_cast<size_t>(c)], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

std::vector<Matrix> as_matrix_list(const json& j, const std::string& path, int k, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != k)
    fail(path, "must be an array of " + std::to_string(k) + " matrices");
  std::vector<Matrix> out;
  for (int i = 0; i < k; ++i)
    out.push_back(as_matrix(j[static_cast<size_t>(i)], path + "[" + std::to_string(i) + "]", d));
  return out;
}

CocycleSpec parse_system(const json& j) {
  check_object(j, "system");
  check_keys(j, "system", {"d", "k", "transitions", "matrices", "potential"});
  const json* dj = find(j, "d");
  const json* kj = find(j, "k");
  const json* mj = find(j, "matrices");
  if (!dj) fail("system.d", "is required");
  if (!kj) fail("system.k", "is required");
  if (!mj) fail("system.matrices", "is required");
  const int d = static_cast<int>(as_integer(*dj, "system.d", 1, kMaxAmbientDim));
  const int k = static_cast<int>(as_integer(*kj, "system.k", 1, kMaxSymbols));

  Sft sft = Sft::full_shift(k);
  if (const json* tj = find(j, "transitions")) {
    if (!tj->is_array() || static_cast<int>(tj->size()) != k)
      fail("system.transitions", "must be an array of " + std::to_string(k) + " rows");
    std::vector<std::vector<int>> rows;
    for (int r = 0; r < k; ++r) {
      const json& row = (*tj)[static_cast<size_t>(r)];
      const std::string rp = "system.transitions[" + std::to_string(r) + "]";
      if (!row.is_array() || static_cast<int>(row.size()) != k)
        fail(rp, "must be an array of " + std::to_string(k) + " entries");
      std::vector<int> out;
      for (int c = 0; c < k; ++c)
        out.push_back(static_cast<int>(
            as_integer(row[static_cast<size_t>(c)], rp + "[" + std::to_string(c) + "]", 0, 1)));
      rows.push_back(std::move(out));
    }
    try {
      sft = Sft::from_transitions(rows);
    } catch (const Error& e) {
      fail("system.transitions", e.what());
    }
  }

  std::vector<Matrix> matrices = as_matrix_list(*mj, "system.matrices", k, d);
  std::vector<double> potential;
  if (const json* pj = find(j, "potential")) {
    potential = as_number_array(*pj, "system.potential");
    if (static_cast<int>(potential.size()) != k)
      fail("system.potential", "needs one weight per symbol");
  }
  try {
    return CocycleSpec::make(std::move(sft), std::move(matrices), std::move(potential));
  } catch (const Error& e) {
    fail("system", e.what());
  }
}

Budgets parse_budgets(const json* j) {
  Budgets b;
  if (!j) return b;
  check_object(*j, "budgets");
  check_keys(*j, "budgets", {"n_max", "word_budget", "cache_bytes", "workers"});
  if (const json* v = find(*j, "n_max"))
    b.n_max = static_cast<int>(as_integer(*v, "budgets.n_max", 1, 64));
  if (const json* v = find(*j, "word_budget")) {
    b.word_budget = as_u64(*v, "budgets.word_budget");
    if (b.word_budget == 0) fail("budgets.word_budget", "must be positive");
  }
  if (const json* v = find(*j, "cache_bytes")) b.cache_bytes = as_u64(*v, "budgets.cache_bytes");
  if (const json* v = find(*j, "workers"))
    b.workers = static_cast<int>(as_integer(*v, "budgets.workers", 1, 256));
  return b;
}

MarkovMeasure parse_measure(const json& j, const CocycleSpec& system) {
  check_object(j, "spectrum.measure");
  check_keys(j, "spectrum.measure", {"bernoulli", "initial", "kernel"});
  const int k = system.k();
  if (const json* bj = find(j, "bernoulli")) {
    if (find(j, "initial") || find(j, "kernel"))
      fail("spectrum.measure", "give either 'bernoulli' or 'initial'+'kernel', not both");
    auto p = as_number_array(*bj, "spectrum.measure.bernoulli");
    if (static_cast<int>(p.size()) != k)
      fail("spectrum.measure.bernoulli", "needs one probability per symbol");
    try {
      return MarkovMeasure::bernoulli(std::move(p));
    } catch (const Error& e) {
      fail("spectrum.measure.bernoulli", e.what());
    }
  }
  const json* ij = find(j, "initial");
  const json* kj = find(j, "kernel");
  if (!ij || !kj) fail("spectrum.measure", "needs 'bernoulli' or both 'initial' and 'kernel'");
  auto initial = as_number_array(*ij, "spectrum.measure.initial");
  if (static_cast<int>(initial.size()) != k)
    fail("spectrum.measure.initial", "needs one probability per symbol");
  if (!kj->is_array() || static_cast<int>(kj->size()) != k)
    fail("spectrum.measure.kernel", "must be an array of " + std::to_string(k) + " rows");
  std::vector<double> kernel;
  for (int r = 0; r < k; ++r) {
    auto row = as_number_array((*kj)[static_cast<size_t>(r)],
                               "spectrum.measure.kernel[" + std::to_string(r) + "]");
    if (static_cast<int>(row.size()) != k)
      fail("spectrum.measure.kernel[" + std::to_string(r) + "]",
           "needs " + std::to_string(k) + " entries");
    kernel.insert(kernel.end(), row.begin(), row.end());
  }
  try {
    return MarkovMeasure::markov(std::move(initial), std::move(kernel));
  } catch (const Error& e) {
    fail("spectrum.measure", e.what());
  }
}

MarkovMeasure default_measure(const CocycleSpec& system) {
  const int k = system.k();
  std::vector<double> kernel(static_cast<size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) {
    const auto& succ = system.sft.successors(i);
    for (uint8_t s : succ)
      kernel[static_cast<size_t>(i) * k + s] = 1.0 / static_cast<double>(succ.size());
  }
  return MarkovMeasure::markov(stationary_distribution(kernel, k), kernel);
}

SpectrumConfig parse_spectrum(const json& j, const CocycleSpec& system) {
  check_object(j, "spectrum");
  check_keys(j, "spectrum", {"measure", "horizon", "trials", "cluster_gap", "q_grid"});
  SpectrumConfig sc;
  if (const json* m = find(j, "measure"))
    sc.measure = parse_measure(*m, system);
  else
    sc.measure = default_measure(system);
  if (const json* v = find(j, "horizon"))
    sc.horizon = static_cast<int>(as_integer(*v, "spectrum.horizon", 1, 100000000));
  if (const json* v = find(j, "trials"))
    sc.trials = static_cast<int>(as_integer(*v, "spectrum.trials", 1, 1000000));
  if (const json* v = find(j, "cluster_gap")) {
    sc.cluster_gap = as_number(*v, "spectrum.cluster_gap");
    if (!(sc.cluster_gap > 0.0)) fail("spectrum.cluster_gap", "must be positive");
  }
  if (const json* v = find(j, "q_grid")) {
    sc.q_grid = ascending_positive(*v, "spectrum.q_grid");
    if (sc.q_grid.size() < 3) fail("spectrum.q_grid", "needs at least 3 points");
  }
  return sc;
}

ContinuityConfig parse_continuity(const json& j, const CocycleSpec& system) {
  check_object(j, "continuity");
  check_keys(j, "continuity", {"kind", "direction", "epsilons", "s_values"});
  ContinuityConfig cc;
  if (const json* v = find(j, "kind")) {
    if (!v->is_string()) fail("continuity.kind", "must be a string");
    cc.kind = v->get<std::string>();
  }
  if (cc.kind != "pressure" && cc.kind != "dimension" && cc.kind != "joint" &&
      cc.kind != "discontinuity")
    fail("continuity.kind", "must be one of pressure, dimension, joint, discontinuity");
  if (const json* v = find(j, "direction")) {
    auto raw = as_matrix_list(*v, "continuity.direction", system.k(), system.dim());
    try {
      cc.direction = make_direction(std::move(raw));
    } catch (const Error& e) {
      fail("continuity.direction", e.what());
    }
  }
  if (const json* v = find(j, "epsilons")) cc.epsilons = ascending_positive(*v, "continuity.epsilons");
  if (const json* v = find(j, "s_values")) {
    cc.s_values = as_number_array(*v, "continuity.s_values");
    for (size_t i = 0; i < cc.s_values.size(); ++i) {
      if (!(cc.s_values[i] >= 0.0)) fail("continuity.s_values", "entries must be nonnegative");
      if (i > 0 && !(cc.s_values[i] > cc.s_values[i - 1]))
        fail("continuity.s_values", "entries must be strictly ascending");
    }
  }
  if (cc.kind != "discontinuity") {
    if (cc.direction.empty()) fail("continuity.direction", "is required for this scan kind");
    if (cc.epsilons.empty()) fail("continuity.epsilons", "is required for this scan kind");
    if (cc.kind != "dimension" && cc.s_values.empty())
      fail("continuity.s_values", "is required for this scan kind");
  }
  return cc;
}

ConesConfig parse_cones(const json& j, const CocycleSpec& system) {
  check_object(j, "cones");
  check_keys(j, "cones", {"axis", "aperture_in", "aperture_out", "samples"});
  ConesConfig cc;
  cc.axis.assign(static_cast<size_t>(system.dim()), 0.0);
  cc.axis[0] = 1.0;
  if (const json* v = find(j, "axis")) {
    cc.axis = as_number_array(*v, "cones.axis");
    if (static_cast<int>(cc.axis.size()) != system.dim())
      fail("cones.axis", "dimension must match the system");
    double n = 0.0;
    for (double c : cc.axis) n += c * c;
    if (!(n > 0.0)) fail("cones.axis", "must be nonzero");
  }
  if (const json* v = find(j, "aperture_in")) cc.aperture_in = as_number(*v, "cones.aperture_in");
  if (const json* v = find(j, "aperture_out"))
    cc.aperture_out = as_number(*v, "cones.aperture_out");
  for (auto [value, name] : {std::pair{cc.aperture_in, "cones.aperture_in"},
                             std::pair{cc.aperture_out, "cones.aperture_out"}})
    if (!(value > 0.0) || !(value < 1.0)) fail(name, "must lie in (0,1)");
  if (const json* v = find(j, "samples"))
    cc.samples = static_cast<int>(as_integer(*v, "cones.samples", 1000, 100000000));
  return cc;
}

}  // namespace

SpectrumConfig default_spectrum_config(const CocycleSpec& system) {
  SpectrumConfig sc;
  sc.measure = default_measure(system);
  return sc;
}

ConesConfig default_cones_config(const CocycleSpec& system) {
  ConesConfig cc;
  cc.axis.assign(static_cast<size_t>(system.dim()), 0.0);
  cc.axis[0] = 1.0;
  return cc;
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    // parse_error for syntax, out_of_range for overflowing literals
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  check_object(root, "config");
  check_keys(root, "",
             {"system", "budgets", "seed", "tolerances", "output", "spectrum", "continuity",
              "cones"});

  RunConfig cfg;
  const json* sys = find(root, "system");
  if (!sys) fail("system", "is required");
  cfg.system = parse_system(*sys);
  cfg.budgets = parse_budgets(find(root, "budgets"));

  if (const json* v = find(root, "seed")) cfg.seed = as_u64(*v, "seed");

  if (const json* t = find(root, "tolerances")) {
    check_object(*t, "tolerances");
    check_keys(*t, "tolerances", {"dimension_tol", "bracket_slack"});
    if (const json* v = find(*t, "dimension_tol")) {
      cfg.dimension_tol = as_number(*v, "tolerances.dimension_tol");
      if (!(cfg.dimension_tol >= 1e-8))
        fail("tolerances.dimension_tol", "must be at least 1e-8");
    }
    if (const json* v = find(*t, "bracket_slack")) {
      cfg.bracket_slack = as_number(*v, "tolerances.bracket_slack");
      if (!(cfg.bracket_slack >= 0.0)) fail("tolerances.bracket_slack", "must be nonnegative");
    }
  }

  if (const json* o = find(root, "output")) {
    check_object(*o, "output");
    check_keys(*o, "output", {"format", "path"});
    if (const json* v = find(*o, "format")) {
      if (!v->is_string()) fail("output.format", "must be a string");
      const std::string f = v->get<std::string>();
      if (f == "json")
        cfg.format = ReportFormat::json;
      else if (f == "csv")
        cfg.format = ReportFormat::csv;
      else
        fail("output.format", "must be 'json' or 'csv'");
    }
    if (const json* v = find(*o, "path")) {
      if (!v->is_string()) fail("output.path", "must be a string");
      cfg.out_path = v->get<std::string>();
    }
  }

  if (const json* v = find(root, "spectrum")) cfg.spectrum = parse_spectrum(*v, cfg.system);
  if (const json* v = find(root, "continuity")) cfg.continuity = parse_continuity(*v, cfg.system);
  if (const json* v = find(root, "cones")) cfg.cones = parse_cones(*v, cfg.system);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace plab
