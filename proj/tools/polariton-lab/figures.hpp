#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "output.hpp"
#include "scenario.hpp"

namespace lab {

struct RunResult {
    Table table;
    nlohmann::json metrics = nlohmann::json::object();
};

// Dispatches on scenario.kind; validates every parameter key.
RunResult run_scenario(const Scenario& s, unsigned threads);

// Cross-checks against an independent solver (kinds: oracle, spectrum).
RunResult run_oracle(const Scenario& s, unsigned threads);

const std::vector<std::string>& figure_ids();

// Embedded scenario text for a figure id; throws SchemaError listing valid ids.
std::string figure_scenario(const std::string& id);

} // namespace lab
