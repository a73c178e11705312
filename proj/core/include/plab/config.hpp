#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plab/pressure.hpp"
#include "plab/symbolic.hpp"

namespace plab {

enum class ReportFormat { json, csv };

/// Optional "spectrum" section: sampling measure and Monte Carlo budgets.
/// The default measure walks the shift uniformly: each kernel row is
/// uniform over the allowed successors, the initial vector is the kernel's
/// stationary distribution.
struct SpectrumConfig {
  MarkovMeasure measure;
  int horizon = 10000;
  int trials = 64;
  double cluster_gap = 0.05;
  std::vector<double> q_grid;  // empty: skip the Legendre pass
};

/// Optional "continuity" section. `kind` selects the scan; `direction` is
/// normalized to unit stacked Frobenius norm on load. The joint scan uses
/// the largest epsilon as its perturbation size.
struct ContinuityConfig {
  std::string kind = "pressure";  // pressure | dimension | joint | discontinuity
  std::vector<Matrix> direction;
  std::vector<double> epsilons;
  std::vector<double> s_values;
};

/// Optional "cones" section for the cone-certificate command.
struct ConesConfig {
  std::vector<double> axis;  // default e_1
  double aperture_in = 0.5;
  double aperture_out = 0.2;
  int samples = 10000;
};

/// Fully resolved run configuration: every optional field carries its
/// documented default after parsing.
struct RunConfig {
  CocycleSpec system;
  Budgets budgets;
  uint64_t seed = 0;
  double dimension_tol = 1e-8;
  double bracket_slack = 1e-9;
  ReportFormat format = ReportFormat::json;
  std::string out_path;  // empty: stdout
  std::optional<SpectrumConfig> spectrum;
  std::optional<ContinuityConfig> continuity;
  std::optional<ConesConfig> cones;
};

/// Section defaults for configs that omit them: the uniform walk measure
/// with horizon 10000 / 64 trials, and the e_1 cone pair (1/2 -> 1/5, 10^4
/// samples).
SpectrumConfig default_spectrum_config(const CocycleSpec& system);
ConesConfig default_cones_config(const CocycleSpec& system);

/// Parses and validates a config document (JSON syntax). Unknown keys,
/// wrong types, and out-of-range values raise ValidationError naming the
/// offending field.
RunConfig parse_config(const std::string& text);

/// parse_config over a file's contents.
RunConfig load_config(const std::string& path);

}  // namespace plab
