#include <stdexcept>
#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"

#include "eabr/error.hpp"
#include "eabr/policy.hpp"

using namespace eabr;

TEST_CASE("select follows the gamma rule on the HEVC ladder") {
  const auto ladder = hevc_reference_ladder();

  const auto light = select(ladder, 22e6, 1.5);
  CHECK(light.selected.bitrate == 10'000'000);
  CHECK(light.threshold == doctest::Approx(14.6667e6).epsilon(1e-4));
  CHECK(light.candidate_set_size == 8);
  CHECK_FALSE(light.fallback_used);

  const auto strict = select(ladder, 4e6, 4.0);  // threshold exactly 1 Mbps
  CHECK(strict.selected.bitrate == 650'000);
  CHECK(strict.threshold == 1e6);
  CHECK_FALSE(strict.fallback_used);

  const auto low = select(ladder, 0.5e6, 1.5);
  CHECK(low.selected.bitrate == 650'000);
  CHECK(low.fallback_used);
  CHECK(low.candidate_set_size == 0);
  CHECK(low.rung == 0);
}

TEST_CASE("inclusive comparison at the threshold") {
  const auto ladder = hevc_reference_ladder();
  CHECK(select(ladder, 20e6, 2.0).selected.bitrate == 10'000'000);
  CHECK(select(ladder, 19.999e6, 2.0).selected.bitrate == 7'500'000);
  CHECK(select(ladder, 0.65e6, 1.0).fallback_used == false);
}

TEST_CASE("baseline_select picks the best rung not above the bandwidth") {
  const auto ladder = hevc_reference_ladder();
  CHECK(baseline_select(ladder, 13e6).selected.bitrate == 10'000'000);
  CHECK(baseline_select(ladder, 22e6).selected.bitrate == 20'000'000);
  const auto fb = baseline_select(ladder, 0.4e6);
  CHECK(fb.selected.bitrate == 650'000);
  CHECK(fb.fallback_used);
}

TEST_CASE("select agrees with an exhaustive scan over the channel levels") {
  const auto ladder = hevc_reference_ladder();
  for (double bw = 0.25; bw <= 30.0; bw += 0.25) {
    for (double g : {1.0, 1.5, 2.0, 4.0, 3.3}) {
      CHECK(static_cast<double>(select(ladder, bw * 1e6, g).selected.bitrate) ==
            doctest::Approx(oracle::select_mbps(bw, g) * 1e6));
    }
  }
}

TEST_CASE("adaptive gamma bands") {
  const AdaptiveConfig cfg;
  CHECK(adaptive_gamma(100, cfg) == 1.5);
  CHECK(adaptive_gamma(70.0001, cfg) == 1.5);
  CHECK(adaptive_gamma(70, cfg) == 2.0);
  CHECK(adaptive_gamma(50, cfg) == 2.0);
  CHECK(adaptive_gamma(30, cfg) == 4.0);
  CHECK(adaptive_gamma(0, cfg) == 4.0);
  CHECK(adaptive_gamma(50, {60, 55}) == 4.0);
}

TEST_CASE("modes") {
  CHECK(EnergyMode::parse("LIGHT").gamma() == 1.5);
  CHECK(EnergyMode::parse("Medium").gamma() == 2.0);
  CHECK(EnergyMode::parse("strict").gamma() == 4.0);
  CHECK(EnergyMode::parse("off").gamma() == 1.0);
  CHECK(EnergyMode::parse("adaptive").is_adaptive());
  CHECK(EnergyMode::custom(2.5).name() == "custom(2.5)");
  CHECK_THROWS_AS(EnergyMode::parse("eco"), std::invalid_argument);
  CHECK_THROWS_AS(EnergyMode::custom(0.9), ValidationError);
  CHECK_THROWS_AS(EnergyMode::adaptive({30, 70}), ValidationError);
  CHECK_THROWS_AS(EnergyMode::adaptive({100, 30}), ValidationError);
  CHECK_THROWS_AS(select(hevc_reference_ladder(), 0.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(select(hevc_reference_ladder(), 1e6, 0.5), std::invalid_argument);
}

TEST_CASE("property: adaptive gamma is non-increasing in SoC") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> soc(0.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double s1 = soc(rng), s2 = soc(rng);
    const double hi = std::max(s1, s2), lo = std::min(s1, s2);
    CHECK(adaptive_gamma(hi, {}) <= adaptive_gamma(lo, {}));
  }
}
