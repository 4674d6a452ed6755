#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace eabr {

// Parameters of the relative-energy model ec_rel = a*exp(-b*bw_rel) + c.
struct ModelParams {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// Relative energy consumption at relative bandwidth `bw_rel` (> 0).
double eval(const ModelParams& params, double bw_rel);

// Published per-combination fits. Labels are "SPA/WIFI/AVC", "SPC/5G/HEVC",
// "SPB/WIFI/AVC+HEVC", ... and "overall"; lookup is case-insensitive.
// Throws std::out_of_range for unknown labels.
ModelParams preset(std::string_view label);
std::vector<std::string> preset_labels();

}  // namespace eabr
