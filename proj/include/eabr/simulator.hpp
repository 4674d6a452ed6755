#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eabr/channel.hpp"
#include "eabr/ladder.hpp"
#include "eabr/model.hpp"
#include "eabr/policy.hpp"

namespace eabr {

struct BatteryConfig {
  double capacity_mah = 0.0;
  double reference_current_ma = 0.0;  // absolute current of the reference representation
  double initial_soc = 100.0;         // percent

  void validate() const;
};

struct QualityScores {
  std::optional<double> psnr;  // dB
  std::optional<double> ssim;
  std::optional<double> vmaf;  // 0-100
};

// Per-representation quality scores, keyed by representation name.
class QualityMap {
 public:
  QualityMap() = default;
  explicit QualityMap(const std::map<std::string, QualityScores>& scores) : scores_(scores.begin(), scores.end()) {}

  const QualityScores* find(std::string_view name) const;
  bool empty() const noexcept { return scores_.empty(); }

  // Every ladder rung must be present and each metric must be given for all
  // rungs or for none. Throws ValidationError otherwise.
  void validate_for(const QualityLadder& ladder) const;

 private:
  std::map<std::string, QualityScores, std::less<>> scores_;
};

// CSV header: name,psnr,ssim,vmaf (empty cell = metric not available).
QualityMap load_quality_map(std::string_view text);

struct SegmentOutcome {
  std::size_t index = 0;
  double bandwidth = 0.0;  // bps
  double gamma_used = 1.0;
  PolicyDecision decision;
  double bw_rel = 0.0;
  double ec_rel = 0.0;
  double download_time = 0.0;  // seconds
  bool stalled = false;
  std::optional<double> soc_after;  // percent, when a battery is simulated
};

// Identifies the inputs shared by sessions that may be compared.
struct SessionContext {
  std::uint64_t ladder_fingerprint = 0;
  std::uint64_t trace_fingerprint = 0;
  ModelParams params;
  double segment_duration = 0.0;

  friend bool operator==(const SessionContext&, const SessionContext&) = default;
};

struct SessionReport {
  EnergyMode mode = EnergyMode::off();
  std::size_t n_segments = 0;
  double mean_ec_rel = 0.0;
  double mean_bitrate = 0.0;  // bps
  QualityScores mean_quality;
  std::size_t stall_count = 0;
  std::size_t fallback_count = 0;
  bool depleted = false;  // stopped early because the battery reached 0%
  std::optional<double> final_soc;
  SessionContext context;
  std::vector<SegmentOutcome> per_segment;  // only with SessionOptions::keep_segments
};

struct SessionOptions {
  bool keep_segments = false;
};

// Plays one request per trace period. The battery is required for adaptive
// mode; `quality` may be null. Throws ValidationError when the trace period
// differs from segment_duration, the adaptive mode has no battery, or the
// quality map lacks a selected representation.
SessionReport run_session(const QualityLadder& ladder, const ChannelTrace& trace, const EnergyMode& mode,
                          const ModelParams& params, const std::optional<BatteryConfig>& battery,
                          const QualityMap* quality, double segment_duration, SessionOptions options = {});

// Runs one session per mode concurrently; results are in `modes` order.
std::vector<SessionReport> run_sessions(const QualityLadder& ladder, const ChannelTrace& trace,
                                        std::span<const EnergyMode> modes, const ModelParams& params,
                                        const std::optional<BatteryConfig>& battery, const QualityMap* quality,
                                        double segment_duration, SessionOptions options = {});

inline constexpr double kPerceptibleVmafDelta = 6.0;

struct ComparisonRow {
  std::string mode;
  double energy_pct = 100.0;
  QualityScores quality;
  QualityScores delta;  // baseline - mode
  bool vmaf_perceptible = false;
};

struct ComparisonTable {
  SessionContext context;
  std::vector<ComparisonRow> rows;  // baseline first
};

// Energy as a percentage of the baseline's mean relative consumption, and
// quality deltas against the baseline. Throws ValidationError when the
// reports were produced from different inputs.
ComparisonTable compare(const SessionReport& baseline, std::span<const SessionReport> others);

// channel,mode,energy_pct,psnr,d_psnr,ssim,d_ssim,vmaf,d_vmaf
std::string comparison_csv(const ComparisonTable& table, std::string_view channel_label);
// Per-segment rows of every report (requires SessionOptions::keep_segments).
std::string segments_csv(std::span<const SessionReport> reports);

std::uint64_t fingerprint(std::string_view bytes);

}  // namespace eabr
