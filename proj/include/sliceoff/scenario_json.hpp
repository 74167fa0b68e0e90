#ifndef SLICEOFF_SCENARIO_JSON_HPP_
#define SLICEOFF_SCENARIO_JSON_HPP_

#include <filesystem>
#include <string>

#include <json.hpp>

#include "sliceoff/model.hpp"

namespace sliceoff {

// JSON document layout:
//   {"units": {...}, "num_devices": N, "num_aps": A, "num_ecs": C, "num_slices": S,
//    "rate": [[...]], "data_size": [...], "complexity": [...],
//    "match_coeff": [[...]], "local_capability": [...], "ec_capability": [[...]]}
// Doubles are written in shortest round-trip form, so load(dump(x)) == x.
nlohmann::json scenario_to_json(const Scenario& scenario);

// Throws std::invalid_argument on missing fields, wrong units or dimension mismatch.
Scenario scenario_from_json(const nlohmann::json& doc);

std::string dump_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace sliceoff

#endif  // SLICEOFF_SCENARIO_JSON_HPP_
