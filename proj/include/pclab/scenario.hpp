#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace pclab {

// A scenario is one JSON object describing either a valued-ring pipeline
// (prefix + relation + requested checks) or an ordered-value selection
// problem.  Ring-specific payloads stay as raw JSON here; the runner parses
// them once the concrete ring is known.
struct Scenario {
    enum class Kind { Valued, Ostrowski };
    Kind kind = Kind::Valued;
    std::string name;
    nlohmann::json raw;
};

// Validates the shared structure (kinds, field presence, basic types) and
// throws config_error with the offending field path.
Scenario parse_scenario(const nlohmann::json& j);

// Resolves a built-in name first, then falls back to reading a file.
Scenario load_scenario(const std::string& name_or_path);

std::vector<std::string> builtin_scenario_names();

// nullptr when the name is not a built-in.
const char* builtin_scenario_text(const std::string& name);

} // namespace pclab
