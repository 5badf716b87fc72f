#pragma once

// Command-line front end. Reports are built as JSON and rendered either as
// JSON or as plain text; trajectories are written as CSV.

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scenario.hpp"

namespace projdens::app {

using Report = nlohmann::ordered_json;

/// Exit codes of the tool.
enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsage = 2 };

/// Suite names accepted by `check --suite`; "all" runs every suite whose
/// inputs are present in the scenario.
const std::vector<std::string>& suite_names();

/// Runs one suite. Throws SchemaError when the scenario lacks its inputs.
Report run_suite(const Scenario& s, const std::string& suite);

/// Entry point: args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace projdens::app
