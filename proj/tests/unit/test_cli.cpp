#include <stdexcept>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "doctest.h"
#include "oracles.hpp"

#include "cli.hpp"
#include "eabr/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "eabr");
  std::ostringstream out, err;
  const int code = eabr::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path tmp(const std::string& name) {
  fs::create_directories(EABR_TEST_TMP);
  return fs::path(EABR_TEST_TMP) / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

// Noise-free measurements following a*exp(-b*x)+1 on top of a 300 mA reference.
std::string synthetic_measurements(double a, double b) {
  std::string s = "device,connection,codec,resolution,bitrate_bps,avg_bandwidth_bps,avg_current_ma\n";
  const double ref = 300.0;
  s += fmt::format("phone,WIFI,HEVC,240p,650000,{},{}\n", 650000.0 * 60.0, ref);
  const std::vector<std::pair<const char*, double>> rungs = {{"480p", 1.25e6}, {"720p", 2.5e6}, {"1080p", 5e6}};
  for (const auto& [res, rate] : rungs) {
    for (double x : {1.0, 1.5, 2.0, 3.0, 4.5}) {
      s += fmt::format("phone,WIFI,HEVC,{},{},{},{:.17g}\n", res, static_cast<long>(rate), rate * x,
                       ref * oracle::model(a, b, 1.0, x));
    }
  }
  return s;
}

}  // namespace

TEST_CASE("parse_bandwidth") {
  CHECK(eabr::cli::parse_bandwidth("22M") == 22e6);
  CHECK(eabr::cli::parse_bandwidth("650K") == 650e3);
  CHECK(eabr::cli::parse_bandwidth("1.5G") == 1.5e9);
  CHECK(eabr::cli::parse_bandwidth("4000000") == 4e6);
  CHECK_THROWS(eabr::cli::parse_bandwidth("fast"));
  CHECK_THROWS(eabr::cli::parse_bandwidth("-1M"));
}

TEST_CASE("channel specs") {
  using eabr::cli::ChannelSpec;
  const auto r = eabr::cli::parse_channel_spec("random:values=1M,4M,block=5,seed=3");
  CHECK(r.kind == ChannelSpec::Kind::kRandom);
  CHECK(r.values == std::vector<double>{1e6, 4e6});
  CHECK(r.block == 5);
  CHECK(r.seed == 3);
  const auto h = eabr::cli::parse_channel_spec("staircase-hold");
  CHECK(h.turn == eabr::StaircaseTurn::kHold);
  CHECK(h.values.size() == 8);
  CHECK(eabr::cli::make_trace(eabr::cli::parse_channel_spec("constant:13M"), 4, 6.0).size() == 4);
  CHECK_THROWS(eabr::cli::parse_channel_spec("sine:3"));
}

TEST_CASE("parameter resolution") {
  const auto p = eabr::cli::resolve_params("overall");
  CHECK(p.a == 1.154);
  CHECK(p.b == 0.677);
  const auto q = eabr::cli::resolve_params("0.5,1.25,1");
  CHECK(q.a == 0.5);
  CHECK(q.b == 1.25);
  CHECK_THROWS(eabr::cli::resolve_params("nonsense"));
}

TEST_CASE("simulate --mode all on a constant high channel") {
  const auto csv = tmp("high.csv");
  const auto r = invoke({"simulate", "--channel", "constant:22M", "--csv", csv.string(), "--output",
                         tmp("high.json").string()});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(slurp(tmp("high.json")));
  const auto& rows = doc.at("comparison").at("rows");
  REQUIRE(rows.size() == 4);
  CHECK(rows[3].at("mode") == "strict");
  CHECK(std::abs(rows[3].at("energy_pct").get<double>() - 68.40) <= 0.05);
  CHECK(doc.at("provenance").at("tool") == "eabr");

  const auto text = slurp(csv);
  CHECK(text.rfind("# {", 0) == 0);
  CHECK(text.find("constant:22M,strict,68.3902") != std::string::npos);
  CHECK(r.err.find("adaptive mode skipped") != std::string::npos);
}

TEST_CASE("simulate with a battery runs adaptive") {
  const auto r = invoke({"simulate", "--channel", "staircase", "--mode", "adaptive", "--capacity-mah", "300",
                         "--reference-current-ma", "300", "--segments", "120"});
  REQUIRE(r.code == 0);
  const auto doc = json::parse(r.out);
  CHECK(doc.at("report").at("mode").at("name") == "adaptive");
  CHECK(doc.at("report").at("final_soc").get<double>() < 100.0);
}

TEST_CASE("random channel output is byte-identical across runs") {
  const std::vector<std::string> args = {"simulate", "--channel", "random:seed=7", "--segments-csv"};
  auto a = args, b = args;
  a.push_back(tmp("seg_a.csv").string());
  b.push_back(tmp("seg_b.csv").string());
  a.insert(a.end(), {"--output", tmp("rand_a.json").string()});
  b.insert(b.end(), {"--output", tmp("rand_b.json").string()});
  REQUIRE(invoke(a).code == 0);
  REQUIRE(invoke(b).code == 0);
  CHECK(slurp(tmp("rand_a.json")) == slurp(tmp("rand_b.json")));
  CHECK(slurp(tmp("seg_a.csv")) == slurp(tmp("seg_b.csv")));

  // the scalar and vector kernels must not change the result
  auto c = args;
  c.insert(c.begin(), {"--kernels", "scalar"});
  c.push_back(tmp("seg_c.csv").string());
  c.insert(c.end(), {"--output", tmp("rand_c.json").string()});
  REQUIRE(invoke(c).code == 0);
  auto prov_free = [](const std::string& text) {
    auto j = json::parse(text);
    j.erase("provenance");
    return j.dump();
  };
  CHECK(prov_free(slurp(tmp("rand_a.json"))) == prov_free(slurp(tmp("rand_c.json"))));
}

TEST_CASE("normalize and fit on synthetic measurements") {
  const auto input = tmp("meas.csv");
  write(input, synthetic_measurements(0.9, 0.8));

  const auto n = invoke({"normalize", "--input", input.string()});
  REQUIRE(n.code == 0);
  CHECK(n.out.find("phone,WIFI,HEVC,60,1,0") != std::string::npos);

  const auto f = invoke({"fit", "--input", input.string(), "--output", tmp("fits.json").string()});
  REQUIRE(f.code == 0);
  const auto doc = json::parse(slurp(tmp("fits.json")));
  const auto& fits = doc.at("fits");
  REQUIRE(fits.size() == 1);  // a single combination: no pooled fit
  CHECK(fits[0].at("combination") == "phone/WIFI/HEVC");
  CHECK(std::abs(fits[0].at("a").get<double>() - 0.9) < 1e-6);
  CHECK(std::abs(fits[0].at("b").get<double>() - 0.8) < 1e-6);
  CHECK(fits[0].at("c").get<double>() == 1.0);
  CHECK(fits[0].at("r2").get<double>() > 0.999999);

  // feed the fit back into the simulator
  const auto s = invoke({"simulate", "--channel", "constant:13M", "--mode", "medium", "--params",
                         tmp("fits.json").string() + "#phone/WIFI/HEVC"});
  REQUIRE(s.code == 0);
  const auto report = json::parse(s.out).at("report");
  CHECK(report.at("mean_ec_rel").get<double>() == doctest::Approx(oracle::model(0.9, 0.8, 1.0, 13.0 / 5.0)));
}

TEST_CASE("compare subcommand") {
  const auto base = tmp("off.json"), strict = tmp("strict.json"), other = tmp("other.json");
  REQUIRE(invoke({"simulate", "--channel", "constant:13M", "--mode", "off", "--output", base.string()}).code == 0);
  REQUIRE(invoke({"simulate", "--channel", "constant:13M", "--mode", "strict", "--output", strict.string()}).code ==
          0);
  const auto r = invoke({"compare", "--baseline", base.string(), "--reports", strict.string(), "--label", "medium"});
  REQUIRE(r.code == 0);
  const auto rows = json::parse(r.out).at("comparison").at("rows");
  CHECK(std::abs(rows[1].at("energy_pct").get<double>() - oracle::energy_pct({13.0}, 4.0)) < 1e-9);

  REQUIRE(invoke({"simulate", "--channel", "constant:4M", "--mode", "strict", "--output", other.string()}).code == 0);
  const auto bad = invoke({"compare", "--baseline", base.string(), "--reports", other.string()});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("mismatched") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"simulate", "--mode", "turbo"}).code == 2);
  CHECK(invoke({"simulate", "--mode", "adaptive"}).code == 2);
  CHECK(invoke({"simulate", "--capacity-mah", "100"}).code == 2);
  CHECK(invoke({"simulate", "--mode", "off", "--csv", tmp("x.csv").string()}).code == 2);
  CHECK(invoke({"fit", "--input", "/nonexistent.csv"}).code == 2);
  CHECK(invoke({"simulate", "--gamma", "0.5"}).code == 2);
  CHECK(invoke({"--kernels", "neon", "simulate"}).code == 2);
}

TEST_CASE("runtime errors exit with 1") {
  const auto bad = tmp("bad_meas.csv");
  write(bad, "device,connection,codec,resolution,bitrate_bps,avg_bandwidth_bps,avg_current_ma\nphone,WIFI,HEVC,240p,x,1,1\n");
  const auto r = invoke({"fit", "--input", bad.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("row 2") != std::string::npos);
  CHECK(invoke({"simulate", "--ladder", EABR_DATA_DIR "/ladder_hevc10.csv", "--channel", "trace:/nonexistent"}).code ==
        1);
}
