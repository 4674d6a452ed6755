#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "eabr/csv.hpp"
#include "eabr/error.hpp"
#include "eabr/fit.hpp"
#include "eabr/json_io.hpp"
#include "eabr/kernels.hpp"
#include "eabr/ladder.hpp"
#include "eabr/measurements.hpp"
#include "eabr/simulator.hpp"
#include "eabr/version.hpp"

namespace eabr::cli {

using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot read '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(fmt::format("cannot write '{}'", path));
  f << content;
}

double parse_number(std::string_view text, std::string_view what) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(fmt::format("{}: '{}' is not a number", what, text));
  }
  return v;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(fmt::format("{}: '{}' is not a non-negative integer", what, text));
  }
  return v;
}

std::vector<double> parse_bandwidth_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& item : csv::split(text, ',')) out.push_back(parse_bandwidth(item));
  return out;
}

json provenance(std::string_view command, json config) {
  return {{"tool", "eabr"},
          {"version", kVersion},
          {"command", command},
          {"kernels", kernels::to_string(kernels::active_backend())},
          {"config", std::move(config)}};
}

// CSV outputs carry the provenance as '#' comment lines.
std::string provenance_comment(const json& prov) { return "# " + prov.dump() + "\n"; }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

double parse_bandwidth(std::string_view text) {
  const auto s = csv::trim(text);
  if (s.empty()) throw UsageError("empty bandwidth value");
  double scale = 1.0;
  std::string_view digits = s;
  switch (std::toupper(static_cast<unsigned char>(s.back()))) {
    case 'K':
      scale = 1e3;
      break;
    case 'M':
      scale = 1e6;
      break;
    case 'G':
      scale = 1e9;
      break;
    default:
      break;
  }
  if (scale != 1.0) digits.remove_suffix(1);
  const double v = parse_number(digits, "bandwidth") * scale;
  if (!(v > 0.0)) throw UsageError(fmt::format("bandwidth must be positive: '{}'", text));
  return v;
}

ChannelSpec parse_channel_spec(std::string_view text) {
  const auto colon = text.find(':');
  const auto kind = text.substr(0, colon);
  const auto body = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

  ChannelSpec spec;
  if (kind == "constant") {
    spec.kind = ChannelSpec::Kind::kConstant;
    spec.values = {parse_bandwidth(body)};
  } else if (kind == "staircase" || kind == "staircase-hold") {
    spec.kind = ChannelSpec::Kind::kStaircase;
    spec.turn = kind == "staircase" ? StaircaseTurn::kSingle : StaircaseTurn::kHold;
    spec.values = body.empty() ? standard_channel_levels() : parse_bandwidth_list(body);
  } else if (kind == "random") {
    spec.kind = ChannelSpec::Kind::kRandom;
    spec.values = standard_channel_levels();
    // values=<list> may itself contain commas: bare items extend it.
    std::string key;
    bool values_given = false;
    for (const auto& item : body.empty() ? std::vector<std::string>{} : csv::split(body, ',')) {
      const auto eq = item.find('=');
      std::string value = item;
      if (eq != std::string::npos) {
        key = item.substr(0, eq);
        value = item.substr(eq + 1);
      } else if (key != "values") {
        throw UsageError(fmt::format("random channel: unexpected item '{}'", item));
      }
      if (key == "values") {
        if (!values_given) spec.values.clear();
        values_given = true;
        spec.values.push_back(parse_bandwidth(value));
      } else if (key == "block") {
        spec.block = parse_u64(value, "block");
      } else if (key == "seed") {
        spec.seed = parse_u64(value, "seed");
        spec.has_seed = true;
      } else {
        throw UsageError(fmt::format("random channel: unknown key '{}'", key));
      }
    }
  } else if (kind == "trace") {
    spec.kind = ChannelSpec::Kind::kTrace;
    if (body.empty()) throw UsageError("trace channel needs a path: trace:<file>");
    spec.path = std::string(body);
  } else {
    throw UsageError(fmt::format("unknown channel kind '{}' (constant|staircase|staircase-hold|random|trace)", kind));
  }
  return spec;
}

ChannelTrace make_trace(const ChannelSpec& spec, std::size_t n_segments, double segment_duration) {
  switch (spec.kind) {
    case ChannelSpec::Kind::kConstant:
      return constant(spec.values.front(), n_segments, segment_duration);
    case ChannelSpec::Kind::kStaircase:
      return staircase(spec.values, n_segments, spec.turn, segment_duration);
    case ChannelSpec::Kind::kRandom:
      return random_blocks(spec.values, spec.block, n_segments, spec.seed, segment_duration);
    case ChannelSpec::Kind::kTrace:
      break;
  }
  return load_trace(read_file(spec.path), segment_duration);
}

ModelParams resolve_params(std::string_view text) {
  const auto hash = text.find('#');
  const auto path = std::string(text.substr(0, hash));
  if (path.size() > 5 && path.ends_with(".json")) {
    const auto fits = fits_from_json(json::parse(read_file(path)));
    if (fits.empty()) throw Error(fmt::format("'{}' contains no fit results", path));
    if (hash == std::string_view::npos) return fits.front().params;
    const auto want = text.substr(hash + 1);
    for (const auto& f : fits) {
      if (f.combination == want) return f.params;
    }
    throw Error(fmt::format("'{}' has no fit for combination '{}'", path, want));
  }
  const auto parts = csv::split(text, ',');
  if (parts.size() == 3) {
    return {parse_number(parts[0], "a"), parse_number(parts[1], "b"), parse_number(parts[2], "c")};
  }
  try {
    return preset(text);
  } catch (const std::out_of_range&) {
    throw UsageError(fmt::format("unknown params '{}': expected a preset label, 'a,b,c', or a fit JSON file", text));
  }
}

namespace {

struct NormalizeArgs {
  std::string input;
  std::string output;
};

struct FitArgs {
  std::string input;
  std::string output;
  double fix_c = 1.0;
  bool free_c = false;
  bool include_flagged = false;
  bool no_overall = false;
};

struct SimulateArgs {
  std::string ladder;
  std::string channel;
  std::string mode = "all";
  std::optional<double> gamma;
  std::string params = "overall";
  std::size_t segments = 360;
  double segment_duration = kDefaultPeriodSeconds;
  std::optional<double> capacity_mah;
  std::optional<double> reference_current_ma;
  double initial_soc = 100.0;
  double high_threshold = 70.0;
  double low_threshold = 30.0;
  std::string quality;
  std::string output;
  std::string csv;
  std::string segments_csv;
  std::string label;
};

struct CompareArgs {
  std::string baseline;
  std::vector<std::string> reports;
  std::string output;
  std::string csv;
  std::string label = "custom";
};

int do_normalize(const NormalizeArgs& a, std::ostream& out, std::ostream& err) {
  const auto records = load_records(read_file(a.input));
  const auto groups = normalize(records);
  const auto prov = provenance("normalize", {{"input", a.input}});
  std::string text = provenance_comment(prov) + "device,connection,codec,bw_rel,ec_rel,flagged\n";
  for (const auto& [combo, points] : groups) {
    for (const auto& p : points) {
      text += fmt::format("{},{},{},{},{},{}\n", combo.device, combo.connection.to_string(), combo.codec.to_string(),
                          p.bw_rel, p.ec_rel, p.flagged ? 1 : 0);
    }
  }
  const auto flagged = count_flagged(groups);
  if (flagged > 0) err << fmt::format("warning: {} point(s) with bw_rel < 1 flagged\n", flagged);
  write_output(a.output, text, out);
  return 0;
}

int do_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
  const auto groups = normalize(load_records(read_file(a.input)));
  FitOptions opts;
  if (a.free_c) {
    opts.fix_c.reset();
  } else {
    opts.fix_c = a.fix_c;
  }
  opts.include_flagged = a.include_flagged;

  json fits = json::array();
  std::vector<RelativePoint> all;
  auto try_fit = [&](const std::vector<RelativePoint>& points, const std::string& label) {
    try {
      const auto r = fit(points, opts);
      for (const auto& d : r.diagnostics) err << fmt::format("{}: {}\n", label, d);
      fits.push_back(fit_to_json(r, label));
    } catch (const FitError& e) {
      err << fmt::format("warning: {}: skipped ({})\n", label, e.what());
    }
  };
  for (const auto& [combo, points] : groups) {
    try_fit(points, combo.label());
    all.insert(all.end(), points.begin(), points.end());
  }
  if (!a.no_overall && groups.size() > 1) try_fit(all, "overall");
  if (fits.empty()) throw Error("no combination could be fitted");

  json config = {{"input", a.input}, {"include_flagged", a.include_flagged}};
  config["fix_c"] = a.free_c ? json(nullptr) : json(a.fix_c);
  const json doc = {{"provenance", provenance("fit", config)}, {"fits", fits}};
  write_output(a.output, dump(doc), out);
  return 0;
}

int do_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const auto ladder = a.ladder.empty() ? hevc_reference_ladder() : parse_ladder(read_file(a.ladder));
  for (const auto& d : validate_ladder(ladder)) err << "warning: " << d.message << "\n";

  const auto spec = parse_channel_spec(a.channel);
  const auto trace = make_trace(spec, a.segments, a.segment_duration);
  const auto params = resolve_params(a.params);

  std::optional<BatteryConfig> battery;
  if (a.capacity_mah || a.reference_current_ma) {
    if (!a.capacity_mah || !a.reference_current_ma) {
      throw UsageError("--capacity-mah and --reference-current-ma must be given together");
    }
    battery = BatteryConfig{*a.capacity_mah, *a.reference_current_ma, a.initial_soc};
    battery->validate();
  }
  const AdaptiveConfig adaptive{a.high_threshold, a.low_threshold};

  std::optional<QualityMap> quality;
  if (!a.quality.empty()) {
    quality = load_quality_map(read_file(a.quality));
    quality->validate_for(ladder);
  }

  std::string mode_name = a.mode;
  std::transform(mode_name.begin(), mode_name.end(), mode_name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const bool all = mode_name == "all";

  std::vector<EnergyMode> modes;
  if (all) {
    modes = {EnergyMode::off(), EnergyMode::light(), EnergyMode::medium(), EnergyMode::strict()};
    if (battery) {
      modes.push_back(EnergyMode::adaptive(adaptive));
    } else {
      err << "warning: adaptive mode skipped (needs --capacity-mah and --reference-current-ma)\n";
    }
    if (a.gamma) modes.push_back(EnergyMode::custom(*a.gamma));
  } else if (a.gamma) {
    modes = {EnergyMode::custom(*a.gamma)};
  } else {
    modes = {EnergyMode::parse(mode_name, adaptive)};
    if (modes.front().is_adaptive() && !battery) {
      throw UsageError("adaptive mode needs --capacity-mah and --reference-current-ma");
    }
  }

  SessionOptions opts;
  opts.keep_segments = !a.segments_csv.empty();
  const auto reports = run_sessions(ladder, trace, modes, params, battery, quality ? &*quality : nullptr,
                                    a.segment_duration, opts);

  json config = {{"ladder", a.ladder.empty() ? "builtin:hevc10" : a.ladder},
                 {"channel", a.channel},
                 {"mode", all ? "all" : modes.front().name()},
                 {"params", {{"spec", a.params}, {"a", params.a}, {"b", params.b}, {"c", params.c}}},
                 {"segments", trace.size()},
                 {"segment_duration", a.segment_duration},
                 {"quality", a.quality}};
  config["seed"] = spec.kind == ChannelSpec::Kind::kRandom ? json(spec.seed) : json(nullptr);
  if (battery) {
    config["battery"] = {{"capacity_mah", battery->capacity_mah},
                         {"reference_current_ma", battery->reference_current_ma},
                         {"initial_soc", battery->initial_soc}};
  }
  if (std::any_of(modes.begin(), modes.end(), [](const EnergyMode& m) { return m.is_adaptive(); })) {
    config["adaptive"] = {{"high_threshold", adaptive.high_threshold}, {"low_threshold", adaptive.low_threshold}};
  }
  const auto prov = provenance("simulate", config);
  const auto label = a.label.empty() ? a.channel : a.label;

  for (const auto& r : reports) {
    if (r.depleted) err << fmt::format("note: {}: battery depleted after {} segments\n", r.mode.name(), r.n_segments);
    if (r.stall_count > 0) err << fmt::format("note: {}: {} stalled segment(s)\n", r.mode.name(), r.stall_count);
  }

  json doc = {{"provenance", prov}};
  if (all) {
    const auto table = compare(reports.front(), std::span(reports).subspan(1));
    json rs = json::array();
    for (const auto& r : reports) rs.push_back(report_to_json(r));
    doc["reports"] = std::move(rs);
    doc["comparison"] = comparison_to_json(table, label);
    if (!a.csv.empty()) write_output(a.csv, provenance_comment(prov) + comparison_csv(table, label), out);
  } else {
    doc["report"] = report_to_json(reports.front());
    if (!a.csv.empty()) {
      throw UsageError("--csv needs --mode all (use the compare subcommand for individual reports)");
    }
  }
  if (!a.segments_csv.empty()) write_output(a.segments_csv, provenance_comment(prov) + segments_csv(reports), out);
  write_output(a.output, dump(doc), out);
  return 0;
}

SessionReport load_report(const std::string& path) {
  const auto j = json::parse(read_file(path));
  if (j.contains("report")) return report_from_json(j.at("report"));
  return report_from_json(j);
}

int do_compare(const CompareArgs& a, std::ostream& out, std::ostream&) {
  const auto baseline = load_report(a.baseline);
  std::vector<SessionReport> others;
  for (const auto& p : a.reports) others.push_back(load_report(p));
  const auto table = compare(baseline, others);
  const auto prov = provenance("compare", {{"baseline", a.baseline}, {"reports", a.reports}});
  if (!a.csv.empty()) write_output(a.csv, provenance_comment(prov) + comparison_csv(table, a.label), out);
  const json doc = {{"provenance", prov}, {"comparison", comparison_to_json(table, a.label)}};
  write_output(a.output, dump(doc), out);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy-aware ABR segment-request simulator and model fitting", "eabr"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  std::string kernel_choice = "auto";
  app.add_option("--kernels", kernel_choice, "Arithmetic kernel backend")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  NormalizeArgs na;
  auto* normalize_cmd = app.add_subcommand("normalize", "Convert measurements into relative (bw_rel, ec_rel) points");
  normalize_cmd->add_option("--input", na.input, "Measurement CSV")->required()->check(CLI::ExistingFile);
  normalize_cmd->add_option("--output", na.output, "Output CSV (stdout if omitted)");

  FitArgs fa;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the exponential model per device/connection/codec");
  fit_cmd->add_option("--input", fa.input, "Measurement CSV")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--output", fa.output, "Output JSON (stdout if omitted)");
  auto* fix_c_opt = fit_cmd->add_option("--fix-c", fa.fix_c, "Fixed asymptote c")->capture_default_str();
  fit_cmd->add_flag("--free-c", fa.free_c, "Fit the asymptote as well")->excludes(fix_c_opt);
  fit_cmd->add_flag("--include-flagged", fa.include_flagged, "Keep points with bw_rel < 1");
  fit_cmd->add_flag("--no-overall", fa.no_overall, "Skip the pooled fit over all combinations");

  SimulateArgs sa;
  auto* sim_cmd = app.add_subcommand("simulate", "Run ABR sessions over a channel and compare energy modes");
  sim_cmd->add_option("--ladder", sa.ladder, "Ladder CSV (built-in 10-rung HEVC ladder if omitted)")
      ->check(CLI::ExistingFile);
  sim_cmd->add_option("--channel", sa.channel, "constant:<bw> | staircase[-hold][:<v,...>] | random:... | trace:<f>")
      ->required();
  sim_cmd->add_option("--mode", sa.mode, "off|light|medium|strict|adaptive|all")->capture_default_str();
  sim_cmd->add_option("--gamma", sa.gamma, "Custom mode divisor (>= 1)")->check(CLI::Range(1.0, 1e9));
  sim_cmd->add_option("--params", sa.params, "Preset label, 'a,b,c', or fits.json[#combination]")
      ->capture_default_str();
  sim_cmd->add_option("--segments", sa.segments, "Number of segments")->capture_default_str()->check(
      CLI::Range(std::size_t{1}, std::size_t{100'000'000}));
  sim_cmd->add_option("--segment-duration", sa.segment_duration, "Segment duration in seconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--capacity-mah", sa.capacity_mah, "Battery capacity (mAh)")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--reference-current-ma", sa.reference_current_ma, "Reference representation current (mA)")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--initial-soc", sa.initial_soc, "Initial state of charge (%)")->capture_default_str();
  sim_cmd->add_option("--high-threshold", sa.high_threshold, "Adaptive Light/Medium SoC threshold (%)")
      ->capture_default_str();
  sim_cmd->add_option("--low-threshold", sa.low_threshold, "Adaptive Medium/Strict SoC threshold (%)")
      ->capture_default_str();
  sim_cmd->add_option("--quality", sa.quality, "Quality map CSV (name,psnr,ssim,vmaf)")->check(CLI::ExistingFile);
  sim_cmd->add_option("--output", sa.output, "Report JSON (stdout if omitted)");
  sim_cmd->add_option("--csv", sa.csv, "Comparison CSV (with --mode all)");
  sim_cmd->add_option("--segments-csv", sa.segments_csv, "Per-segment CSV");
  sim_cmd->add_option("--label", sa.label, "Channel label used in the comparison");

  CompareArgs ca;
  auto* cmp_cmd = app.add_subcommand("compare", "Compare session reports against a baseline");
  cmp_cmd->add_option("--baseline", ca.baseline, "Baseline report JSON")->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--reports", ca.reports, "Report JSON files")->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--output", ca.output, "Comparison JSON (stdout if omitted)");
  cmp_cmd->add_option("--csv", ca.csv, "Comparison CSV");
  cmp_cmd->add_option("--label", ca.label, "Channel label")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (kernel_choice == "auto") kernels::set_backend(kernels::best_backend());
    if (kernel_choice == "scalar") kernels::set_backend(kernels::Backend::kScalar);
    if (kernel_choice == "avx2") kernels::set_backend(kernels::Backend::kAvx2);

    if (*normalize_cmd) return do_normalize(na, out, err);
    if (*fit_cmd) return do_fit(fa, out, err);
    if (*sim_cmd) return do_simulate(sa, out, err);
    if (*cmp_cmd) return do_compare(ca, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace eabr::cli
