#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "eabr/fit.hpp"
#include "eabr/simulator.hpp"

namespace eabr {

// {"combination", "a", "b", "c", "r2", "pcc", "srocc", "n", "excluded"}
nlohmann::json fit_to_json(const FitResult& fit, std::string_view combination);

struct LabeledParams {
  std::string combination;
  ModelParams params;
};
// Accepts a single fit object, an array of them, or {"fits": [...]}.
std::vector<LabeledParams> fits_from_json(const nlohmann::json& j);

nlohmann::json mode_to_json(const EnergyMode& mode);
EnergyMode mode_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const SessionReport& report);
SessionReport report_from_json(const nlohmann::json& j);

nlohmann::json comparison_to_json(const ComparisonTable& table, std::string_view channel_label);

}  // namespace eabr
