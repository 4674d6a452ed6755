#include "eabr/simulator.hpp"

#include <cmath>
#include <future>

#include <fmt/format.h>

#include "eabr/csv.hpp"
#include "eabr/error.hpp"

namespace eabr {

namespace {

constexpr double kSecondsPerHour = 3600.0;

std::string optional_cell(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string(); }

std::optional<double> optional_delta(const std::optional<double>& base, const std::optional<double>& other) {
  if (base && other) return *base - *other;
  return std::nullopt;
}

}  // namespace

void BatteryConfig::validate() const {
  if (!(capacity_mah > 0.0)) throw ValidationError("battery capacity must be positive");
  if (!(reference_current_ma > 0.0)) throw ValidationError("reference current must be positive");
  if (!(initial_soc > 0.0 && initial_soc <= 100.0)) throw ValidationError("initial SoC must be in (0, 100]");
}

const QualityScores* QualityMap::find(std::string_view name) const {
  const auto it = scores_.find(name);
  return it == scores_.end() ? nullptr : &it->second;
}

void QualityMap::validate_for(const QualityLadder& ladder) const {
  int psnr = 0, ssim = 0, vmaf = 0;
  for (const auto& r : ladder) {
    const auto* s = find(r.name);
    if (s == nullptr) throw ValidationError(fmt::format("quality map has no entry for representation '{}'", r.name));
    psnr += s->psnr.has_value();
    ssim += s->ssim.has_value();
    vmaf += s->vmaf.has_value();
  }
  const int n = static_cast<int>(ladder.size());
  for (const auto& [metric, count] : {std::pair{"psnr", psnr}, {"ssim", ssim}, {"vmaf", vmaf}}) {
    if (count != 0 && count != n) {
      throw ValidationError(fmt::format("quality metric {} given for {} of {} representations", metric, count, n));
    }
  }
}

QualityMap load_quality_map(std::string_view text) {
  std::map<std::string, QualityScores> scores;
  for (const auto& row : csv::read(text, {"name", "psnr", "ssim", "vmaf"})) {
    QualityScores s;
    if (!row.fields[1].empty()) s.psnr = csv::parse_double(row, 1, "psnr");
    if (!row.fields[2].empty()) s.ssim = csv::parse_double(row, 2, "ssim");
    if (!row.fields[3].empty()) s.vmaf = csv::parse_double(row, 3, "vmaf");
    if (!scores.emplace(row.fields[0], s).second) {
      throw ParseError(row.line, fmt::format("duplicate representation '{}'", row.fields[0]));
    }
  }
  return QualityMap(std::move(scores));
}

std::uint64_t fingerprint(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

SessionReport run_session(const QualityLadder& ladder, const ChannelTrace& trace, const EnergyMode& mode,
                          const ModelParams& params, const std::optional<BatteryConfig>& battery,
                          const QualityMap* quality, double segment_duration, SessionOptions options) {
  if (trace.period_duration() != segment_duration) {
    throw ValidationError(fmt::format("trace period {} s differs from segment duration {} s", trace.period_duration(),
                                      segment_duration));
  }
  if (battery) battery->validate();
  if (mode.is_adaptive() && !battery) throw ValidationError("adaptive mode requires a battery configuration");
  if (quality != nullptr && quality->empty()) quality = nullptr;

  SessionReport report;
  report.mode = mode;
  report.context = {fingerprint(serialize_ladder(ladder)), fingerprint(serialize_trace(trace)), params,
                    segment_duration};

  double soc = battery ? battery->initial_soc : 0.0;
  double ec_sum = 0.0;
  double bitrate_sum = 0.0;
  double psnr_sum = 0.0, ssim_sum = 0.0, vmaf_sum = 0.0;
  std::size_t psnr_n = 0, ssim_n = 0, vmaf_n = 0;

  for (std::size_t t = 0; t < trace.size(); ++t) {
    SegmentOutcome seg;
    seg.index = t;
    seg.bandwidth = trace[t];
    seg.gamma_used = mode.is_adaptive() ? adaptive_gamma(soc, mode.adaptive_config()) : mode.gamma();
    seg.decision = select(ladder, seg.bandwidth, seg.gamma_used);
    const double bitrate = static_cast<double>(seg.decision.selected.bitrate);
    seg.bw_rel = seg.bandwidth / bitrate;
    seg.ec_rel = eval(params, seg.bw_rel);
    seg.download_time = bitrate * segment_duration / seg.bandwidth;
    seg.stalled = seg.download_time > segment_duration;

    if (quality != nullptr) {
      const auto* s = quality->find(seg.decision.selected.name);
      if (s == nullptr) {
        throw ValidationError(
            fmt::format("quality map has no entry for selected representation '{}'", seg.decision.selected.name));
      }
      if (s->psnr) psnr_sum += *s->psnr, ++psnr_n;
      if (s->ssim) ssim_sum += *s->ssim, ++ssim_n;
      if (s->vmaf) vmaf_sum += *s->vmaf, ++vmaf_n;
    }

    ec_sum += seg.ec_rel;
    bitrate_sum += bitrate;
    report.stall_count += seg.stalled;
    report.fallback_count += seg.decision.fallback_used;
    ++report.n_segments;

    if (battery) {
      const double drained_mah = battery->reference_current_ma * seg.ec_rel * segment_duration / kSecondsPerHour;
      soc -= 100.0 * drained_mah / battery->capacity_mah;
      if (soc <= 0.0) {
        soc = 0.0;
        report.depleted = true;
      }
      seg.soc_after = soc;
    }
    if (options.keep_segments) report.per_segment.push_back(std::move(seg));
    if (report.depleted) break;
  }

  const double n = static_cast<double>(report.n_segments);
  report.mean_ec_rel = ec_sum / n;
  report.mean_bitrate = bitrate_sum / n;
  if (psnr_n) report.mean_quality.psnr = psnr_sum / static_cast<double>(psnr_n);
  if (ssim_n) report.mean_quality.ssim = ssim_sum / static_cast<double>(ssim_n);
  if (vmaf_n) report.mean_quality.vmaf = vmaf_sum / static_cast<double>(vmaf_n);
  if (battery) report.final_soc = soc;
  return report;
}

std::vector<SessionReport> run_sessions(const QualityLadder& ladder, const ChannelTrace& trace,
                                        std::span<const EnergyMode> modes, const ModelParams& params,
                                        const std::optional<BatteryConfig>& battery, const QualityMap* quality,
                                        double segment_duration, SessionOptions options) {
  std::vector<std::future<SessionReport>> pending;
  pending.reserve(modes.size());
  for (const auto& mode : modes) {
    pending.push_back(std::async(std::launch::async, [&, mode] {
      return run_session(ladder, trace, mode, params, battery, quality, segment_duration, options);
    }));
  }
  std::vector<SessionReport> out;
  out.reserve(modes.size());
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

ComparisonTable compare(const SessionReport& baseline, std::span<const SessionReport> others) {
  if (!(baseline.mean_ec_rel > 0.0)) throw ValidationError("baseline mean relative energy must be positive");
  ComparisonTable table;
  table.context = baseline.context;

  auto row_for = [&](const SessionReport& r) {
    ComparisonRow row;
    row.mode = r.mode.name();
    row.energy_pct = 100.0 * r.mean_ec_rel / baseline.mean_ec_rel;
    row.quality = r.mean_quality;
    row.delta.psnr = optional_delta(baseline.mean_quality.psnr, r.mean_quality.psnr);
    row.delta.ssim = optional_delta(baseline.mean_quality.ssim, r.mean_quality.ssim);
    row.delta.vmaf = optional_delta(baseline.mean_quality.vmaf, r.mean_quality.vmaf);
    row.vmaf_perceptible = row.delta.vmaf && *row.delta.vmaf > kPerceptibleVmafDelta;
    return row;
  };

  table.rows.push_back(row_for(baseline));
  for (const auto& r : others) {
    if (!(r.context == baseline.context)) {
      throw ValidationError(fmt::format("mismatched session contexts: '{}' was not run on the baseline's inputs",
                                        r.mode.name()));
    }
    table.rows.push_back(row_for(r));
  }
  return table;
}

std::string comparison_csv(const ComparisonTable& table, std::string_view channel_label) {
  std::string out = "channel,mode,energy_pct,psnr,d_psnr,ssim,d_ssim,vmaf,d_vmaf\n";
  for (const auto& row : table.rows) {
    out += fmt::format("{},{},{:.4f},{},{},{},{},{},{}\n", channel_label, row.mode, row.energy_pct,
                       optional_cell(row.quality.psnr), optional_cell(row.delta.psnr), optional_cell(row.quality.ssim),
                       optional_cell(row.delta.ssim), optional_cell(row.quality.vmaf), optional_cell(row.delta.vmaf));
  }
  return out;
}

std::string segments_csv(std::span<const SessionReport> reports) {
  std::string out =
      "mode,index,bandwidth_bps,gamma,representation,bitrate_bps,bw_rel,ec_rel,download_time_s,fallback,stalled,"
      "soc_after\n";
  for (const auto& report : reports) {
    const auto mode = report.mode.name();
    for (const auto& s : report.per_segment) {
      out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", mode, s.index, s.bandwidth, s.gamma_used,
                         s.decision.selected.name, s.decision.selected.bitrate, s.bw_rel, s.ec_rel, s.download_time,
                         s.decision.fallback_used ? 1 : 0, s.stalled ? 1 : 0, optional_cell(s.soc_after));
    }
  }
  return out;
}

}  // namespace eabr
