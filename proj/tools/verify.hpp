#pragma once

#include <string>
#include <vector>

#include "plab/report.hpp"

namespace plab::tools {

/// Names of the built-in property suites ("svf", "cones", "all").
std::vector<std::string> verify_suite_names();

/// Runs one suite; throws ValidationError for an unknown name.
VerifyCommandResult run_verify_suite(const std::string& name);

}  // namespace plab::tools
