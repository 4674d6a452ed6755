#include "eabr/policy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "eabr/error.hpp"

namespace eabr {

void AdaptiveConfig::validate() const {
  if (!(low_threshold > 0.0 && low_threshold < high_threshold && high_threshold < 100.0)) {
    throw ValidationError(
        fmt::format("adaptive thresholds must satisfy 0 < low < high < 100 (got low={}, high={})", low_threshold,
                    high_threshold));
  }
}

EnergyMode EnergyMode::adaptive(AdaptiveConfig config) {
  config.validate();
  EnergyMode m(Kind::kAdaptive, kGammaLight);
  m.adaptive_ = config;
  return m;
}

EnergyMode EnergyMode::custom(double gamma) {
  if (!std::isfinite(gamma) || gamma < 1.0) throw ValidationError(fmt::format("gamma must be >= 1 (got {})", gamma));
  return EnergyMode(Kind::kCustom, gamma);
}

EnergyMode EnergyMode::parse(std::string_view name, AdaptiveConfig config) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "off") return off();
  if (lower == "light") return light();
  if (lower == "medium") return medium();
  if (lower == "strict") return strict();
  if (lower == "adaptive") return adaptive(config);
  throw std::invalid_argument(fmt::format("unknown energy-saving mode '{}'", name));
}

std::string EnergyMode::name() const {
  switch (kind_) {
    case Kind::kOff:
      return "off";
    case Kind::kLight:
      return "light";
    case Kind::kMedium:
      return "medium";
    case Kind::kStrict:
      return "strict";
    case Kind::kAdaptive:
      return "adaptive";
    case Kind::kCustom:
      break;
  }
  return fmt::format("custom({})", gamma_);
}

PolicyDecision select(const QualityLadder& ladder, double bandwidth, double gamma) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw std::invalid_argument(fmt::format("bandwidth must be positive (got {})", bandwidth));
  }
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument(fmt::format("gamma must be >= 1 (got {})", gamma));
  }
  PolicyDecision d;
  d.threshold = bandwidth / gamma;
  // Rungs are ascending, so the candidate set is a prefix.
  const auto it = std::upper_bound(ladder.begin(), ladder.end(), d.threshold,
                                   [](double t, const Representation& r) { return t < static_cast<double>(r.bitrate); });
  d.candidate_set_size = static_cast<std::size_t>(it - ladder.begin());
  d.fallback_used = d.candidate_set_size == 0;
  d.rung = d.fallback_used ? 0 : d.candidate_set_size - 1;
  d.selected = ladder[d.rung];
  return d;
}

PolicyDecision baseline_select(const QualityLadder& ladder, double bandwidth) {
  return select(ladder, bandwidth, kGammaOff);
}

double adaptive_gamma(double soc, const AdaptiveConfig& config) {
  if (soc > config.high_threshold) return kGammaLight;
  if (soc > config.low_threshold) return kGammaMedium;
  return kGammaStrict;
}

}  // namespace eabr
