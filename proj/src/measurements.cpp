#include "eabr/measurements.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <climits>

#include <fmt/format.h>

#include "eabr/csv.hpp"
#include "eabr/error.hpp"

namespace eabr {

namespace {

const std::vector<std::string> kHeader = {"device",        "connection",        "codec",         "resolution",
                                          "bitrate_bps",   "avg_bandwidth_bps", "avg_current_ma"};

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

bool resolution_less(const std::string& a, const std::string& b) {
  const auto ra = resolution_rank(a);
  const auto rb = resolution_rank(b);
  if (ra != rb) return ra < rb;
  return a < b;
}

}  // namespace

Connection Connection::parse(std::string_view text) {
  const auto u = upper(text);
  if (u == "WIFI" || u == "WI-FI" || u == "WLAN") return {Kind::kWifi, {}};
  if (u == "4G" || u == "LTE" || u == "LTE_4G") return {Kind::kLte4G, {}};
  if (u == "5G" || u == "NR" || u == "NR_5G" || u == "5G_NSA") return {Kind::kNr5G, {}};
  return {Kind::kOther, std::string(text)};
}

std::string Connection::to_string() const {
  switch (kind) {
    case Kind::kWifi:
      return "WIFI";
    case Kind::kLte4G:
      return "4G";
    case Kind::kNr5G:
      return "5G";
    case Kind::kOther:
      break;
  }
  return other;
}

std::string Combination::label() const {
  return fmt::format("{}/{}/{}", device, connection.to_string(), codec.to_string());
}

long resolution_rank(std::string_view label) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), value);
  if (ec != std::errc() || ptr == label.data()) return LONG_MAX;
  return value;
}

std::vector<MeasurementRecord> load_records(std::string_view text) {
  std::vector<MeasurementRecord> out;
  for (const auto& row : csv::read(text, kHeader)) {
    MeasurementRecord r;
    r.device = row.fields[0];
    if (r.device.empty()) throw ParseError(row.line, "empty device");
    r.connection = Connection::parse(row.fields[1]);
    r.codec = Codec::parse(row.fields[2]);
    r.resolution_label = row.fields[3];
    r.bitrate = csv::parse_int(row, 4, "bitrate_bps");
    r.avg_bandwidth = csv::parse_double(row, 5, "avg_bandwidth_bps");
    r.avg_current = csv::parse_double(row, 6, "avg_current_ma");
    if (r.bitrate <= 0) throw ParseError(row.line, "bitrate_bps must be positive");
    if (r.avg_bandwidth <= 0) throw ParseError(row.line, "avg_bandwidth_bps must be positive");
    if (r.avg_current <= 0) throw ParseError(row.line, "avg_current_ma must be positive");
    out.push_back(std::move(r));
  }
  return out;
}

double reference_consumption(const std::vector<MeasurementRecord>& records, const Combination& combination) {
  std::vector<const MeasurementRecord*> group;
  for (const auto& r : records) {
    if (Combination::of(r) == combination) group.push_back(&r);
  }
  if (group.empty()) throw ValidationError(fmt::format("empty group for combination {}", combination.label()));

  const auto min_bitrate =
      (*std::min_element(group.begin(), group.end(),
                         [](const auto* x, const auto* y) { return x->bitrate < y->bitrate; }))->bitrate;
  const auto& lowest_resolution =
      (*std::min_element(group.begin(), group.end(), [](const auto* x, const auto* y) {
        return resolution_less(x->resolution_label, y->resolution_label);
      }))->resolution_label;

  double sum = 0.0;
  std::size_t n = 0;
  for (const auto* r : group) {
    if (r->bitrate == min_bitrate && r->resolution_label == lowest_resolution) {
      sum += r->avg_current;
      ++n;
    }
  }
  if (n == 0) {
    throw ValidationError(fmt::format("no reference representation for combination {}: minimum bitrate {} bps is not "
                                      "measured at the lowest resolution '{}'",
                                      combination.label(), min_bitrate, lowest_resolution));
  }
  return sum / static_cast<double>(n);
}

NormalizedGroups normalize(const std::vector<MeasurementRecord>& records) {
  std::map<Combination, double> reference;
  for (const auto& r : records) {
    const auto key = Combination::of(r);
    if (!reference.contains(key)) reference.emplace(key, reference_consumption(records, key));
  }

  NormalizedGroups out;
  for (const auto& r : records) {
    const auto key = Combination::of(r);
    RelativePoint p;
    p.bw_rel = r.avg_bandwidth / static_cast<double>(r.bitrate);
    p.ec_rel = r.avg_current / reference.at(key);
    p.source = key;
    p.flagged = p.bw_rel < 1.0;
    out[key].push_back(std::move(p));
  }
  return out;
}

std::size_t count_flagged(const NormalizedGroups& groups) {
  std::size_t n = 0;
  for (const auto& [key, points] : groups) {
    n += static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const auto& p) { return p.flagged; }));
  }
  return n;
}

}  // namespace eabr
