#include "pclab/scenario.hpp"

#include <array>
#include <fstream>
#include <utility>

#include "pclab/errors.hpp"

namespace pclab {

namespace {

using nlohmann::json;

constexpr const char* kSqrt2 = R"({
  "kind": "valued",
  "name": "sqrt2_7adic",
  "ring": "padic:7",
  "h": ["-2", "0", "1"],
  "prefix": {"hensel": {"poly": ["-2", "0", "1"], "root0": "3"}, "length": 12},
  "x_precision": 16,
  "checks": ["validate", "kap1", "ka", "stages", "transitions", "compose"],
  "g_list": [["-3", "1"], ["0", "1"], ["1", "1"], ["5"], ["14"]]
})";

constexpr const char* kArtinSchreier = R"({
  "kind": "valued",
  "name": "artin_schreier_p2",
  "ring": "tadic:F2",
  "h": [[0, 1], [1], [1]],
  "prefix": {"hensel": {"poly": [[0, 1], [1], [1]], "root0": 0}, "length": 5},
  "x_precision": 20,
  "checks": ["validate", "kap1", "ka", "stages", "transitions", "compose"],
  "g_list": [[[], [1]], [[0, 1], [1]], [[1]], [[0, 1]]]
})";

constexpr const char* kSqrt1pt = R"({
  "kind": "valued",
  "name": "sqrt_1pt_f3t",
  "ring": "tadic:F3",
  "h": [[-1, -1], [], [1]],
  "prefix": {"hensel": {"poly": [[-1, -1], [], [1]], "root0": 1}, "length": 8},
  "x_precision": 16,
  "checks": ["validate", "kap1", "ka", "stages", "transitions", "compose"],
  "g_list": [[[-1], [1]], [[], [1]], [[2]], [[0, 1]]]
})";

constexpr const char* kOstrowskiDemo = R"({
  "kind": "ostrowski",
  "name": "ostrowski_demo",
  "group": "Z^2:lex",
  "betas": [[0, 0], [0, 10]],
  "ts": [2, 1],
  "gammas": [[1, 0], [2, 0], [3, 0]]
})";

constexpr std::array<std::pair<const char*, const char*>, 4> kBuiltins{{
    {"sqrt2_7adic", kSqrt2},
    {"artin_schreier_p2", kArtinSchreier},
    {"sqrt_1pt_f3t", kSqrt1pt},
    {"ostrowski_demo", kOstrowskiDemo},
}};

const char* kKnownChecks[] = {"validate", "kap1", "ka", "stages", "transitions", "compose"};

void require(bool cond, const std::string& path, const std::string& what) {
    if (!cond) throw config_error("scenario field '" + path + "': " + what);
}

void validate_valued(const json& j) {
    require(j.contains("ring") && j.at("ring").is_string(), "ring", "must be a ring descriptor string");
    require(j.contains("h") && j.at("h").is_array(), "h", "must be a coefficient array");
    require(j.at("h").size() >= 3, "h", "relation must have degree at least 2");
    require(j.contains("x_precision") && j.at("x_precision").is_number_integer() &&
                j.at("x_precision").get<long>() >= 1,
            "x_precision", "must be a positive integer");

    require(j.contains("prefix") && j.at("prefix").is_object(), "prefix", "must be an object");
    const json& p = j.at("prefix");
    if (p.contains("literal")) {
        require(p.at("literal").is_array() && p.at("literal").size() >= 3, "prefix.literal",
                "must list at least three elements");
    } else if (p.contains("hensel")) {
        const json& h = p.at("hensel");
        require(h.is_object() && h.contains("poly") && h.at("poly").is_array(), "prefix.hensel.poly",
                "must be a coefficient array");
        require(h.contains("root0"), "prefix.hensel.root0", "missing seed");
        require(p.contains("length") && p.at("length").is_number_integer() &&
                    p.at("length").get<long>() >= 3,
                "prefix.length", "must be an integer of at least 3");
    } else {
        require(false, "prefix", "must contain 'literal' or 'hensel'");
    }

    if (j.contains("checks")) {
        require(j.at("checks").is_array(), "checks", "must be an array");
        for (const auto& c : j.at("checks")) {
            require(c.is_string(), "checks", "entries must be strings");
            bool known = false;
            for (const char* k : kKnownChecks)
                if (c.get<std::string>() == k) known = true;
            require(known, "checks", "unknown check: " + c.get<std::string>());
        }
    }
    if (j.contains("g_list")) {
        require(j.at("g_list").is_array(), "g_list", "must be an array of polynomials");
        for (const auto& g : j.at("g_list")) {
            require(g.is_array(), "g_list", "entries must be coefficient arrays");
            require(g.size() < j.at("h").size(), "g_list",
                    "test polynomial degree must be below the relation degree");
        }
    }
    if (j.contains("indices")) {
        require(j.at("indices").is_array(), "indices", "must be an array");
        long prev = -1;
        for (const auto& idx : j.at("indices")) {
            require(idx.is_number_integer() && idx.get<long>() >= 0, "indices",
                    "entries must be non-negative integers");
            require(idx.get<long>() > prev, "indices", "entries must strictly increase");
            prev = idx.get<long>();
        }
    }
    if (j.contains("x"))
        require(j.at("x").is_object() && j.at("x").contains("digits"), "x",
                "must be an approximation record with digits");
}

void validate_ostrowski(const json& j) {
    require(j.contains("group") && j.at("group").is_string(), "group", "must be a group descriptor");
    require(j.contains("betas") && j.at("betas").is_array() && !j.at("betas").empty(), "betas",
            "must be a non-empty array");
    require(j.contains("ts") && j.at("ts").is_array() && j.at("ts").size() == j.at("betas").size(),
            "ts", "must match betas in length");
    for (const auto& t : j.at("ts"))
        require(t.is_number_integer() && t.get<long>() >= 1, "ts", "multipliers must be positive integers");
    require(j.contains("gammas") && j.at("gammas").is_array() && !j.at("gammas").empty(), "gammas",
            "must be a non-empty array");
}

} // namespace

Scenario parse_scenario(const nlohmann::json& j) {
    require(j.is_object(), "", "scenario must be a JSON object");
    require(j.contains("name") && j.at("name").is_string() && !j.at("name").get<std::string>().empty(),
            "name", "must be a non-empty string");
    require(j.contains("kind") && j.at("kind").is_string(), "kind",
            "must be 'valued' or 'ostrowski'");

    Scenario sc;
    sc.name = j.at("name").get<std::string>();
    sc.raw = j;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "valued") {
        sc.kind = Scenario::Kind::Valued;
        validate_valued(j);
    } else if (kind == "ostrowski") {
        sc.kind = Scenario::Kind::Ostrowski;
        validate_ostrowski(j);
    } else {
        require(false, "kind", "must be 'valued' or 'ostrowski'");
    }
    return sc;
}

std::vector<std::string> builtin_scenario_names() {
    std::vector<std::string> out;
    for (const auto& [name, text] : kBuiltins) out.emplace_back(name);
    return out;
}

const char* builtin_scenario_text(const std::string& name) {
    for (const auto& [n, text] : kBuiltins)
        if (name == n) return text;
    return nullptr;
}

Scenario load_scenario(const std::string& name_or_path) {
    if (const char* text = builtin_scenario_text(name_or_path))
        return parse_scenario(json::parse(text));
    std::ifstream in(name_or_path);
    if (!in) throw config_error("no built-in scenario or readable file named '" + name_or_path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw config_error("could not parse scenario file '" + name_or_path + "': " + e.what());
    }
    return parse_scenario(j);
}

} // namespace pclab
