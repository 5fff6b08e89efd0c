#pragma once

#include <json.hpp>

#include <optional>
#include <string>

#include "pclab/scenario.hpp"

namespace pclab {

struct RunResult {
    int exit_code = 0;   // 0 PASS, 1 FAIL, 2 INDETERMINATE (3 is reserved for config errors)
    std::string verdict;
    nlohmann::json report;
    std::string summary;
};

// Executes a scenario's checks in dependency order with short-circuiting.
// Precision precedence: explicit override, then the PCLAB_PRECISION
// environment variable, then the scenario's own x_precision.
// Throws config_error for malformed scenarios or environment values.
RunResult run_scenario(const Scenario& sc, std::optional<long> precision_override = std::nullopt);

struct VerifyResult {
    bool ok = false;
    std::string log;
};

// Arithmetic-only recheck of an emitted report: rebuilds every certified
// section from the report's own data (no root lifting is repeated) and
// compares section by section.
VerifyResult verify_report(const nlohmann::json& report);

} // namespace pclab
