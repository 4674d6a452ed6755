#include "eabr/json_io.hpp"

#include <fmt/format.h>

#include "eabr/error.hpp"

namespace eabr {

using nlohmann::json;

namespace {

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

json scores_to_json(const QualityScores& s) {
  return {{"psnr", optional_json(s.psnr)}, {"ssim", optional_json(s.ssim)}, {"vmaf", optional_json(s.vmaf)}};
}

QualityScores scores_from_json(const json& j) {
  return {optional_from(j, "psnr"), optional_from(j, "ssim"), optional_from(j, "vmaf")};
}

json params_to_json(const ModelParams& p) { return {{"a", p.a}, {"b", p.b}, {"c", p.c}}; }

ModelParams params_from_json(const json& j) {
  return {j.at("a").get<double>(), j.at("b").get<double>(), j.at("c").get<double>()};
}

}  // namespace

json fit_to_json(const FitResult& fit, std::string_view combination) {
  return {{"combination", combination}, {"a", fit.params.a},    {"b", fit.params.b},
          {"c", fit.params.c},          {"r2", fit.r_squared},  {"pcc", fit.pcc},
          {"srocc", fit.srocc},         {"n", fit.n_points},    {"excluded", fit.n_excluded}};
}

std::vector<LabeledParams> fits_from_json(const json& j) {
  std::vector<LabeledParams> out;
  try {
    if (j.is_object() && j.contains("fits")) return fits_from_json(j.at("fits"));
    if (j.is_array()) {
      for (const auto& item : j) {
        auto sub = fits_from_json(item);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
    out.push_back({j.value("combination", std::string()), params_from_json(j)});
  } catch (const json::exception& e) {
    throw ParseError(0, fmt::format("invalid fit result JSON: {}", e.what()));
  }
  return out;
}

json mode_to_json(const EnergyMode& mode) {
  json j = {{"name", mode.name()}, {"gamma", mode.gamma()}};
  if (mode.is_adaptive()) {
    j["high_threshold"] = mode.adaptive_config().high_threshold;
    j["low_threshold"] = mode.adaptive_config().low_threshold;
    j.erase("gamma");
  }
  return j;
}

EnergyMode mode_from_json(const json& j) {
  const auto name = j.at("name").get<std::string>();
  if (name.rfind("custom", 0) == 0) return EnergyMode::custom(j.at("gamma").get<double>());
  AdaptiveConfig cfg;
  if (j.contains("high_threshold")) cfg.high_threshold = j.at("high_threshold").get<double>();
  if (j.contains("low_threshold")) cfg.low_threshold = j.at("low_threshold").get<double>();
  return EnergyMode::parse(name, cfg);
}

json report_to_json(const SessionReport& r) {
  json j = {{"mode", mode_to_json(r.mode)},
            {"n_segments", r.n_segments},
            {"mean_ec_rel", r.mean_ec_rel},
            {"mean_bitrate", r.mean_bitrate},
            {"mean_quality", scores_to_json(r.mean_quality)},
            {"stall_count", r.stall_count},
            {"fallback_count", r.fallback_count},
            {"depleted", r.depleted},
            {"final_soc", optional_json(r.final_soc)},
            {"context",
             {{"ladder_fingerprint", fmt::format("{:016x}", r.context.ladder_fingerprint)},
              {"trace_fingerprint", fmt::format("{:016x}", r.context.trace_fingerprint)},
              {"params", params_to_json(r.context.params)},
              {"segment_duration", r.context.segment_duration}}}};
  if (!r.per_segment.empty()) {
    json segs = json::array();
    for (const auto& s : r.per_segment) {
      segs.push_back({{"index", s.index},
                      {"bandwidth", s.bandwidth},
                      {"gamma", s.gamma_used},
                      {"representation", s.decision.selected.name},
                      {"bitrate", s.decision.selected.bitrate},
                      {"threshold", s.decision.threshold},
                      {"candidates", s.decision.candidate_set_size},
                      {"fallback", s.decision.fallback_used},
                      {"bw_rel", s.bw_rel},
                      {"ec_rel", s.ec_rel},
                      {"download_time", s.download_time},
                      {"stalled", s.stalled},
                      {"soc_after", optional_json(s.soc_after)}});
    }
    j["per_segment"] = std::move(segs);
  }
  return j;
}

SessionReport report_from_json(const json& j) {
  try {
    SessionReport r;
    r.mode = mode_from_json(j.at("mode"));
    r.n_segments = j.at("n_segments").get<std::size_t>();
    r.mean_ec_rel = j.at("mean_ec_rel").get<double>();
    r.mean_bitrate = j.at("mean_bitrate").get<double>();
    r.mean_quality = scores_from_json(j.at("mean_quality"));
    r.stall_count = j.at("stall_count").get<std::size_t>();
    r.fallback_count = j.at("fallback_count").get<std::size_t>();
    r.depleted = j.value("depleted", false);
    r.final_soc = optional_from(j, "final_soc");
    const auto& ctx = j.at("context");
    r.context.ladder_fingerprint = std::stoull(ctx.at("ladder_fingerprint").get<std::string>(), nullptr, 16);
    r.context.trace_fingerprint = std::stoull(ctx.at("trace_fingerprint").get<std::string>(), nullptr, 16);
    r.context.params = params_from_json(ctx.at("params"));
    r.context.segment_duration = ctx.at("segment_duration").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(0, fmt::format("invalid session report JSON: {}", e.what()));
  }
}

json comparison_to_json(const ComparisonTable& table, std::string_view channel_label) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"mode", row.mode},
                    {"energy_pct", row.energy_pct},
                    {"quality", scores_to_json(row.quality)},
                    {"delta", scores_to_json(row.delta)},
                    {"vmaf_perceptible", row.vmaf_perceptible}});
  }
  return {{"channel", channel_label}, {"params", params_to_json(table.context.params)}, {"rows", std::move(rows)}};
}

}  // namespace eabr
