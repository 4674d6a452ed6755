#include "eabr/ladder.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <fmt/format.h>

#include "eabr/csv.hpp"
#include "eabr/error.hpp"

namespace eabr {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

const std::vector<std::string> kLadderHeader = {"name", "width", "height", "label", "bitrate_bps", "codec"};

}  // namespace

Codec Codec::parse(std::string_view text) {
  const auto u = upper(text);
  if (u == "AVC" || u == "H264" || u == "H.264") return avc();
  if (u == "HEVC" || u == "H265" || u == "H.265") return hevc();
  return Codec{Kind::kOther, std::string(text)};
}

std::string Codec::to_string() const {
  switch (kind) {
    case Kind::kAvc:
      return "AVC";
    case Kind::kHevc:
      return "HEVC";
    case Kind::kOther:
      break;
  }
  return other;
}

QualityLadder::QualityLadder(std::vector<Representation> reps) : reps_(std::move(reps)) {
  if (reps_.empty()) throw ValidationError("quality ladder is empty");
  std::set<std::string> names;
  for (const auto& r : reps_) {
    if (r.bitrate <= 0) throw ValidationError(fmt::format("representation '{}': bitrate must be positive", r.name));
    if (r.width <= 0 || r.height <= 0) {
      throw ValidationError(fmt::format("representation '{}': width and height must be positive", r.name));
    }
    if (!names.insert(r.name).second) throw ValidationError(fmt::format("duplicate representation name '{}'", r.name));
  }
  std::stable_sort(reps_.begin(), reps_.end(),
                   [](const Representation& x, const Representation& y) { return x.bitrate < y.bitrate; });
  for (std::size_t i = 1; i < reps_.size(); ++i) {
    if (reps_[i].bitrate == reps_[i - 1].bitrate) {
      throw ValidationError(fmt::format("duplicate bitrate {} bps ('{}' and '{}')", reps_[i].bitrate,
                                        reps_[i - 1].name, reps_[i].name));
    }
  }
}

std::size_t QualityLadder::find(std::string_view name) const noexcept {
  const auto it = std::find_if(reps_.begin(), reps_.end(), [&](const Representation& r) { return r.name == name; });
  return static_cast<std::size_t>(it - reps_.begin());
}

QualityLadder parse_ladder(std::string_view text) {
  const auto rows = csv::read(text, kLadderHeader);
  if (rows.empty()) throw ParseError(0, "ladder has no representations");

  std::vector<Representation> reps;
  std::set<std::string> names;
  std::set<std::int64_t> bitrates;
  for (const auto& row : rows) {
    Representation r;
    r.name = row.fields[0];
    if (r.name.empty()) throw ParseError(row.line, "empty representation name");
    r.width = static_cast<int>(csv::parse_int(row, 1, "width"));
    r.height = static_cast<int>(csv::parse_int(row, 2, "height"));
    r.label = row.fields[3];
    r.bitrate = csv::parse_int(row, 4, "bitrate_bps");
    r.codec = Codec::parse(row.fields[5]);
    if (r.width <= 0 || r.height <= 0) throw ParseError(row.line, "width and height must be positive");
    if (r.bitrate <= 0) throw ParseError(row.line, fmt::format("non-positive bitrate {}", r.bitrate));
    if (!names.insert(r.name).second) throw ParseError(row.line, fmt::format("duplicate name '{}'", r.name));
    if (!bitrates.insert(r.bitrate).second) throw ParseError(row.line, fmt::format("duplicate bitrate {}", r.bitrate));
    reps.push_back(std::move(r));
  }
  return QualityLadder(std::move(reps));
}

std::string serialize_ladder(const QualityLadder& ladder) {
  std::string out = "name,width,height,label,bitrate_bps,codec\n";
  for (const auto& r : ladder) {
    out += fmt::format("{},{},{},{},{},{}\n", r.name, r.width, r.height, r.label, r.bitrate, r.codec.to_string());
  }
  return out;
}

std::vector<LadderDiagnostic> validate_ladder(const QualityLadder& ladder, double max_ratio) {
  std::vector<LadderDiagnostic> out;
  for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
    const double ratio = static_cast<double>(ladder[i + 1].bitrate) / static_cast<double>(ladder[i].bitrate);
    if (ratio > max_ratio) {
      out.push_back({i, ratio,
                     fmt::format("bitrate gap {} -> {} bps (ratio {:.3f} > {:.3f}) coarsens mode granularity",
                                 ladder[i].bitrate, ladder[i + 1].bitrate, ratio, max_ratio)});
    }
  }
  return out;
}

QualityLadder hevc_reference_ladder() {
  const auto hevc = Codec::hevc();
  return QualityLadder({
      {"hevc_240p", 428, 182, "240p", 650'000, hevc},
      {"hevc_480p", 854, 382, "480p", 1'250'000, hevc},
      {"hevc_576p", 1024, 458, "576p", 2'000'000, hevc},
      {"hevc_720p", 1280, 572, "720p", 2'500'000, hevc},
      {"hevc_960p", 1440, 644, "960p", 3'500'000, hevc},
      {"hevc_1080p", 1920, 858, "1080p", 5'000'000, hevc},
      {"hevc_1200p", 2560, 1144, "1200p", 7'500'000, hevc},
      {"hevc_1440p", 2880, 1286, "1440p", 10'000'000, hevc},
      {"hevc_1600p", 3440, 1536, "1600p", 15'000'000, hevc},
      {"hevc_2160p", 3840, 1714, "2160p", 20'000'000, hevc},
  });
}

}  // namespace eabr
