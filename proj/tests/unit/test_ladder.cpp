#include <stdexcept>
#include <algorithm>
#include <random>

#include "doctest.h"

#include "eabr/error.hpp"
#include "eabr/ladder.hpp"

using namespace eabr;

namespace {

const char* kTableLadder = R"(# HEVC ladder
name,width,height,label,bitrate_bps,codec
hevc_240p,428,182,240p,650000,HEVC
hevc_480p,854,382,480p,1250000,HEVC
hevc_576p,1024,458,576p,2000000,HEVC
hevc_720p,1280,572,720p,2500000,HEVC
hevc_960p,1440,644,960p,3500000,HEVC
hevc_1080p,1920,858,1080p,5000000,HEVC
hevc_1200p,2560,1144,1200p,7500000,HEVC
hevc_1440p,2880,1286,1440p,10000000,HEVC
hevc_1600p,3440,1536,1600p,15000000,HEVC
hevc_2160p,3840,1714,2160p,20000000,HEVC
)";

std::size_t error_row(const char* text) {
  try {
    parse_ladder(text);
  } catch (const ParseError& e) {
    return e.row();
  }
  return 0;
}

}  // namespace

TEST_CASE("parse_ladder reads the ten-rung HEVC ladder") {
  const auto ladder = parse_ladder(kTableLadder);
  CHECK(ladder.size() == 10);
  CHECK(ladder.lowest().bitrate == 650'000);
  CHECK(ladder.highest().bitrate == 20'000'000);
  CHECK(ladder.lowest().label == "240p");
  CHECK(ladder.lowest().codec == Codec::hevc());
  CHECK(ladder == hevc_reference_ladder());
}

TEST_CASE("single-row ladder is degenerate but valid") {
  const auto ladder = parse_ladder("name,width,height,label,bitrate_bps,codec\nonly,640,360,360p,800000,AVC\n");
  CHECK(ladder.size() == 1);
  CHECK(ladder.lowest() == ladder.highest());
  CHECK(ladder.lowest().codec == Codec::avc());
}

TEST_CASE("row order does not matter") {
  const std::string header = "name,width,height,label,bitrate_bps,codec\n";
  const auto asc = parse_ladder(header + "lo,1,1,lo,100,HEVC\nmid,2,2,mid,200,HEVC\nhi,3,3,hi,300,HEVC\n");
  const auto desc = parse_ladder(header + "hi,3,3,hi,300,HEVC\nmid,2,2,mid,200,HEVC\nlo,1,1,lo,100,HEVC\n");
  CHECK(asc == desc);
  CHECK(desc[0].name == "lo");
}

TEST_CASE("parse errors name the offending row") {
  const std::string header = "name,width,height,label,bitrate_bps,codec\n";
  CHECK(error_row((header + "a,1,1,x,100,HEVC\na,1,1,y,200,HEVC\n").c_str()) == 3);     // duplicate name
  CHECK(error_row((header + "a,1,1,x,100,HEVC\nb,1,1,y,100,HEVC\n").c_str()) == 3);     // duplicate bitrate
  CHECK(error_row((header + "a,1,1,x,0,HEVC\n").c_str()) == 2);                         // non-positive
  CHECK(error_row((header + "a,1,1,x,-5,HEVC\n").c_str()) == 2);
  CHECK(error_row((header + "a,1,1,x,1.5e6,HEVC\n").c_str()) == 2);                     // integers only
  CHECK(error_row((header + "# c\na,1,1,x,100\n").c_str()) == 3);                       // missing field
  CHECK(error_row("name,bitrate\n") == 1);                                               // bad header
  CHECK_THROWS_AS(parse_ladder(header), ParseError);                                      // no rows
}

TEST_CASE("validate_ladder flags large gaps") {
  // adjacent ratios of the HEVC ladder peak at 1.25/0.65 = 1.923
  CHECK(validate_ladder(hevc_reference_ladder()).empty());

  const QualityLadder gap({{"a", 1, 1, "a", 1'000'000, Codec::hevc()}, {"b", 1, 1, "b", 10'000'000, Codec::hevc()}});
  const auto diags = validate_ladder(gap);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].ratio == doctest::Approx(10.0));
  CHECK(diags[0].lower_index == 0);

  CHECK(validate_ladder(QualityLadder({{"a", 1, 1, "a", 5, Codec::hevc()}})).empty());
  CHECK(validate_ladder(hevc_reference_ladder(), 1.5).size() == 2);  // 1.923 and 1.6
}

TEST_CASE("constructor rejects invalid ladders") {
  CHECK_THROWS_AS(QualityLadder({}), ValidationError);
  CHECK_THROWS_AS(QualityLadder({{"a", 1, 1, "", 0, Codec::hevc()}}), ValidationError);
  CHECK_THROWS_AS(QualityLadder({{"a", 0, 1, "", 10, Codec::hevc()}}), ValidationError);
  CHECK_THROWS_AS(QualityLadder({{"a", 1, 1, "", 10, Codec::hevc()}, {"a", 1, 1, "", 20, Codec::hevc()}}),
                  ValidationError);
}

TEST_CASE("property: serialize/parse round trip and strict ordering") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    std::vector<std::int64_t> rates;
    while (static_cast<int>(rates.size()) < n) {
      const auto r = static_cast<std::int64_t>(1 + rng() % 50'000'000);
      if (std::find(rates.begin(), rates.end(), r) == rates.end()) rates.push_back(r);
    }
    std::vector<Representation> reps;
    for (int i = 0; i < n; ++i) {
      const auto codec = i % 3 == 0 ? Codec::avc() : (i % 3 == 1 ? Codec::hevc() : Codec::parse("AV1"));
      reps.push_back({"r" + std::to_string(i), 16 + i, 9 + i, std::to_string(100 + i) + "p", rates[i], codec});
    }
    const QualityLadder ladder(reps);
    for (std::size_t i = 0; i + 1 < ladder.size(); ++i) CHECK(ladder[i].bitrate < ladder[i + 1].bitrate);
    CHECK(parse_ladder(serialize_ladder(ladder)) == ladder);
  }
}
