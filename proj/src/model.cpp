#include "eabr/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace eabr {

namespace {

struct Preset {
  std::string_view label;
  ModelParams params;
};

constexpr std::array<Preset, 16> kPresets{{
    {"SPA/WIFI/AVC", {0.653, 0.452, 1.0}},
    {"SPA/WIFI/HEVC", {0.890, 0.628, 1.0}},
    {"SPA/WIFI/AVC+HEVC", {0.704, 0.480, 1.0}},
    {"SPB/WIFI/AVC", {0.947, 0.329, 1.0}},
    {"SPB/WIFI/HEVC", {0.863, 0.256, 1.0}},
    {"SPB/WIFI/AVC+HEVC", {0.911, 0.308, 1.0}},
    {"SPC/WIFI/AVC", {0.828, 0.524, 1.0}},
    {"SPC/WIFI/HEVC", {0.825, 0.476, 1.0}},
    {"SPC/WIFI/AVC+HEVC", {0.826, 0.499, 1.0}},
    {"SPC/4G/AVC", {1.121, 0.468, 1.0}},
    {"SPC/4G/HEVC", {1.021, 0.356, 1.0}},
    {"SPC/4G/AVC+HEVC", {1.051, 0.406, 1.0}},
    {"SPC/5G/AVC", {0.238, 0.500, 1.0}},
    {"SPC/5G/HEVC", {0.167, 0.373, 1.0}},
    {"SPC/5G/AVC+HEVC", {0.229, 0.489, 1.0}},
    {"OVERALL", {1.154, 0.677, 1.0}},
}};

bool iequals(std::string_view x, std::string_view y) {
  return x.size() == y.size() && std::equal(x.begin(), x.end(), y.begin(), [](unsigned char p, unsigned char q) {
           return std::toupper(p) == std::toupper(q);
         });
}

}  // namespace

double eval(const ModelParams& params, double bw_rel) { return params.a * std::exp(-params.b * bw_rel) + params.c; }

ModelParams preset(std::string_view label) {
  for (const auto& p : kPresets) {
    if (iequals(p.label, label)) return p.params;
  }
  throw std::out_of_range("unknown model preset '" + std::string(label) + "'");
}

std::vector<std::string> preset_labels() {
  std::vector<std::string> out;
  for (const auto& p : kPresets) out.emplace_back(p.label == "OVERALL" ? "overall" : p.label);
  return out;
}

}  // namespace eabr
