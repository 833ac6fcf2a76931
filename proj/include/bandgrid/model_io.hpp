#pragma once

#include <string>

#include "bandgrid/eval.hpp"

#include "json.hpp"

namespace bandgrid {

inline constexpr int kModelFormatVersion = 1;

nlohmann::json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& j);

void save_model(const TrainedModel& model, const std::string& path, bool force = false);
TrainedModel load_model(const std::string& path);

// Per variable, per band: the scale weight then the output weight list, at 10
// significant digits. variable < 0 dumps every variable.
std::string inspect_text(const Grid& grid, int variable = -1);

}  // namespace bandgrid
