#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "eabr/ladder.hpp"

namespace eabr {

struct Connection {
  enum class Kind { kWifi, kLte4G, kNr5G, kOther };

  Kind kind = Kind::kWifi;
  std::string other;

  static Connection parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const Connection&, const Connection&) = default;
  friend auto operator<=>(const Connection&, const Connection&) = default;
};

// One playback session measured on a device.
struct MeasurementRecord {
  std::string device;
  Connection connection;
  Codec codec;
  std::string resolution_label;
  std::int64_t bitrate = 0;     // bps
  double avg_bandwidth = 0.0;   // bps
  double avg_current = 0.0;     // mA
};

// Grouping key for normalization.
struct Combination {
  std::string device;
  Connection connection;
  Codec codec;

  static Combination of(const MeasurementRecord& r) { return {r.device, r.connection, r.codec}; }

  // "device/connection/codec", the label format used in fit reports.
  std::string label() const;

  friend bool operator==(const Combination&, const Combination&) = default;
  friend auto operator<=>(const Combination&, const Combination&) = default;
};

struct RelativePoint {
  double bw_rel = 0.0;  // available bandwidth / representation bitrate
  double ec_rel = 0.0;  // session current / reference current
  Combination source;
  bool flagged = false;  // bw_rel < 1: bandwidth below the requested bitrate
};

using NormalizedGroups = std::map<Combination, std::vector<RelativePoint>>;

// CSV header: device,connection,codec,resolution,bitrate_bps,avg_bandwidth_bps,avg_current_ma
std::vector<MeasurementRecord> load_records(std::string_view text);

// Mean avg_current over the combination's reference-representation records:
// those at the group's minimum bitrate and lowest resolution. Throws
// ValidationError if the group is empty or the minimum-bitrate records are
// not at the group's lowest resolution.
double reference_consumption(const std::vector<MeasurementRecord>& records, const Combination& combination);

NormalizedGroups normalize(const std::vector<MeasurementRecord>& records);

std::size_t count_flagged(const NormalizedGroups& groups);

// Numeric ordering key for labels like "240p" or "1080p"; labels without a
// leading integer sort after all numeric ones.
long resolution_rank(std::string_view label);

}  // namespace eabr
