#include <stdexcept>
#include <random>

#include "doctest.h"

#include "eabr/model.hpp"

using namespace eabr;

TEST_CASE("eval matches hand evaluation of the overall curve") {
  const ModelParams overall{1.154, 0.677, 1.0};
  CHECK(std::abs(eval(overall, 1.1) - 1.5480) < 5e-4);
  CHECK(std::abs(eval(overall, 4.4) - 1.0587) < 5e-4);
}

TEST_CASE("eval degenerate and asymptotic cases") {
  for (double x : {0.1, 1.0, 3.7, 1e3}) CHECK(eval({0.0, 0.9, 1.25}, x) == 1.25);
  CHECK(std::abs(eval({1.154, 0.677, 1.0}, 1e6) - 1.0) < 1e-9);
}

TEST_CASE("presets") {
  CHECK(preset("overall") == ModelParams{1.154, 0.677, 1.0});
  CHECK(preset("OVERALL") == ModelParams{1.154, 0.677, 1.0});
  CHECK(preset("SPC/5G/HEVC") == ModelParams{0.167, 0.373, 1.0});
  CHECK(preset("SPA/WIFI/AVC") == ModelParams{0.653, 0.452, 1.0});
  CHECK(preset("spb/wifi/avc+hevc") == ModelParams{0.911, 0.308, 1.0});
  CHECK(preset_labels().size() == 16);
  for (const auto& label : preset_labels()) CHECK(preset(label).c == 1.0);
  CHECK_THROWS_AS(preset("SPD/WIFI/AVC"), std::out_of_range);
}

TEST_CASE("property: eval strictly decreasing and above the asymptote") {
  std::mt19937_64 rng(3);
  // kept where a*exp(-b*x) stays well above the spacing of doubles near c
  std::uniform_real_distribution<double> param(0.01, 3.0);
  std::uniform_real_distribution<double> decay(0.01, 1.0);
  std::uniform_real_distribution<double> bw(0.5, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const ModelParams p{param(rng), decay(rng), 1.0};
    const double x1 = bw(rng);
    const double x2 = x1 + 0.01 + bw(rng) * 0.1;
    CHECK(eval(p, x1) > eval(p, x2));
    CHECK(eval(p, x1) > p.c);
  }
}
