#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "eabr/ladder.hpp"

namespace eabr {

// SoC band limits (percent) for the adaptive schedule.
struct AdaptiveConfig {
  double high_threshold = 70.0;
  double low_threshold = 30.0;

  // Throws ValidationError unless 0 < low < high < 100.
  void validate() const;
};

inline constexpr double kGammaOff = 1.0;
inline constexpr double kGammaLight = 1.5;
inline constexpr double kGammaMedium = 2.0;
inline constexpr double kGammaStrict = 4.0;

class EnergyMode {
 public:
  enum class Kind { kOff, kLight, kMedium, kStrict, kAdaptive, kCustom };

  static EnergyMode off() { return EnergyMode(Kind::kOff, kGammaOff); }
  static EnergyMode light() { return EnergyMode(Kind::kLight, kGammaLight); }
  static EnergyMode medium() { return EnergyMode(Kind::kMedium, kGammaMedium); }
  static EnergyMode strict() { return EnergyMode(Kind::kStrict, kGammaStrict); }
  static EnergyMode adaptive(AdaptiveConfig config = {});
  // Throws ValidationError when gamma < 1 or not finite.
  static EnergyMode custom(double gamma);

  // off|light|medium|strict|adaptive, case-insensitive. Throws
  // std::invalid_argument otherwise.
  static EnergyMode parse(std::string_view name, AdaptiveConfig config = {});

  Kind kind() const noexcept { return kind_; }
  // Fixed divisor; meaningless for kAdaptive (returns kGammaLight).
  double gamma() const noexcept { return gamma_; }
  const AdaptiveConfig& adaptive_config() const noexcept { return adaptive_; }
  bool is_adaptive() const noexcept { return kind_ == Kind::kAdaptive; }

  // "off", "light", ..., "custom(2.5)".
  std::string name() const;

  friend bool operator==(const EnergyMode& x, const EnergyMode& y) {
    return x.kind_ == y.kind_ && x.gamma_ == y.gamma_ && x.adaptive_.high_threshold == y.adaptive_.high_threshold &&
           x.adaptive_.low_threshold == y.adaptive_.low_threshold;
  }

 private:
  EnergyMode(Kind kind, double gamma) : kind_(kind), gamma_(gamma) {}

  Kind kind_;
  double gamma_;
  AdaptiveConfig adaptive_{};
};

struct PolicyDecision {
  std::size_t rung = 0;           // index into the ladder
  Representation selected;
  double threshold = 0.0;         // bandwidth / gamma, bps
  std::size_t candidate_set_size = 0;
  bool fallback_used = false;
};

// Highest rung with bitrate <= bandwidth / gamma, or the lowest rung with
// fallback_used when no rung qualifies. Requires bandwidth > 0, gamma >= 1
// (std::invalid_argument otherwise).
PolicyDecision select(const QualityLadder& ladder, double bandwidth, double gamma);

// Energy-saving mode off: select with gamma = 1.
PolicyDecision baseline_select(const QualityLadder& ladder, double bandwidth);

// Light above the high threshold, Medium down to (but excluding) the low
// threshold, Strict at or below it.
double adaptive_gamma(double soc, const AdaptiveConfig& config);

}  // namespace eabr
