#pragma once

#include <nlohmann/json.hpp>

#include "slope/simulation.hpp"

namespace slope {

nlohmann::json to_json(const SimulationConfig& config);

/// Overlays the keys present in `j` onto `base`. Unknown keys and wrongly
/// typed values raise InputError; the result is validated.
SimulationConfig simulation_config_from_json(const nlohmann::json& j, SimulationConfig base = {});

nlohmann::json to_json(const TuningSchedule& schedule);

}  // namespace slope
