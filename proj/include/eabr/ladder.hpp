#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace eabr {

struct Codec {
  enum class Kind { kAvc, kHevc, kOther };

  Kind kind = Kind::kHevc;
  std::string other;  // only meaningful for kOther

  static Codec avc() { return {Kind::kAvc, {}}; }
  static Codec hevc() { return {Kind::kHevc, {}}; }
  // "AVC"/"HEVC" (case-insensitive) map to the named kinds, anything else
  // becomes kOther carrying the original text. Combined labels such as
  // "AVC+HEVC" are kOther.
  static Codec parse(std::string_view text);

  std::string to_string() const;

  friend bool operator==(const Codec&, const Codec&) = default;
  friend auto operator<=>(const Codec&, const Codec&) = default;
};

struct Representation {
  std::string name;
  int width = 0;
  int height = 0;
  std::string label;          // equivalent resolution, e.g. "240p"
  std::int64_t bitrate = 0;   // bits per second
  Codec codec;

  friend bool operator==(const Representation&, const Representation&) = default;
};

// Diagnostic produced by validate_ladder.
struct LadderDiagnostic {
  std::size_t lower_index = 0;  // rung i; the gap is between i and i+1
  double ratio = 0.0;
  std::string message;
};

inline constexpr double kDefaultGapRatio = 2.0;

// Ordered set of representations, strictly ascending by bitrate. Immutable
// once constructed.
class QualityLadder {
 public:
  // Sorts by bitrate and validates. Throws ValidationError on an empty list,
  // duplicate names, duplicate bitrates, or non-positive bitrate/width/height.
  explicit QualityLadder(std::vector<Representation> reps);

  std::size_t size() const noexcept { return reps_.size(); }
  const Representation& operator[](std::size_t i) const { return reps_[i]; }
  const Representation& at(std::size_t i) const { return reps_.at(i); }
  const Representation& lowest() const noexcept { return reps_.front(); }
  const Representation& highest() const noexcept { return reps_.back(); }

  // Index of the rung with the given name, or size() when absent.
  std::size_t find(std::string_view name) const noexcept;

  auto begin() const noexcept { return reps_.begin(); }
  auto end() const noexcept { return reps_.end(); }
  const std::vector<Representation>& representations() const noexcept { return reps_; }

  friend bool operator==(const QualityLadder&, const QualityLadder&) = default;

 private:
  std::vector<Representation> reps_;
};

// CSV header: name,width,height,label,bitrate_bps,codec
QualityLadder parse_ladder(std::string_view text);
std::string serialize_ladder(const QualityLadder& ladder);

// Warns about adjacent rungs whose bitrate ratio exceeds `max_ratio`.
std::vector<LadderDiagnostic> validate_ladder(const QualityLadder& ladder,
                                              double max_ratio = kDefaultGapRatio);

// The ten-rung HEVC ladder used for the energy-saving experiments
// (0.65 Mbps at 240p up to 20 Mbps at 2160p).
QualityLadder hevc_reference_ladder();

}  // namespace eabr
