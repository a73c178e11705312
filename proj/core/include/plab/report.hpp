#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "plab/cones.hpp"
#include "plab/config.hpp"
#include "plab/continuity.hpp"
#include "plab/dimension.hpp"
#include "plab/pressure.hpp"
#include "plab/spectrum.hpp"

namespace plab {

struct PressureCommandResult {
  std::string label;  // "s=1.5" or "flags=[1,0.5]"
  PressureEstimate estimate;
};

struct SpectrumRateRow {
  double s = 0.0;
  double sampled = 0.0;  // Monte Carlo expected svf growth rate
  double std_error = 0.0;
  double predicted = 0.0;  // rate implied by the Lyapunov exponents
};

struct SpectrumCommandResult {
  LyapunovData lyapunov;
  std::vector<SpectrumRateRow> rates;
  std::optional<LegendreSpectrum> legendre;
};

struct ConesCommandResult {
  std::vector<double> axis;
  double aperture_in = 0.0;
  double aperture_out = 0.0;
  std::vector<ConeMapCertificate> certificates;  // one per generator
  bool all_hold = false;
  double almost_mult = 0.0;  // nan unless every generator certified
};

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyCommandResult {
  std::string suite;
  std::vector<VerifyCheck> checks;
  bool all_passed = false;
};

using CommandResult =
    std::variant<PressureCommandResult, DimensionResult, JsrResult, SpectrumCommandResult,
                 ScanReport, ConesCommandResult, VerifyCommandResult>;

/// Renders a report in the config's format.
///
/// JSON reports use the envelope {"schema": "pressure-lab/report/v1",
/// "command": ..., "config": ..., "result": ...} with the fully resolved
/// config embedded; the worker count is omitted from it since it never
/// affects results. Non-finite numbers serialize as the strings "-inf",
/// "inf", "nan". Reports carry no timestamps: identical config and seed
/// must give identical bytes.
///
/// CSV reports print a header row and data rows at 17 significant digits.
/// Scan results emit one row per grid point; every other result is
/// flattened to key,value rows with dotted paths.
std::string render_report(const RunConfig& cfg, const std::string& command,
                          const CommandResult& result);

/// Writes to cfg.out_path (created or truncated), or stdout when empty.
void write_report(const RunConfig& cfg, const std::string& text);

}  // namespace plab
