#include <stdexcept>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "eabr/correlation.hpp"

using namespace eabr;
using V = std::vector<double>;

TEST_CASE("pearson and spearman on small fixed vectors") {
  CHECK(pearson(V{1, 2, 3}, V{2, 4, 6}) == doctest::Approx(1.0));
  CHECK(spearman(V{1, 2, 3}, V{2, 4, 6}) == doctest::Approx(1.0));
  CHECK(spearman(V{1, 2, 3}, V{9, 4, 1}) == doctest::Approx(-1.0));
  CHECK(pearson(V{1, 2, 3}, V{9, 4, 1}) == doctest::Approx(-0.9897433186107869));
  // Ties share rank 2.5.
  CHECK(spearman(V{1, 2, 2, 3}, V{10, 20, 20, 30}) == doctest::Approx(1.0));
  CHECK(pearson(V{1, 2, 3, 4, 5}, V{2, 1, 4, 3, 5}) == doctest::Approx(0.8));
  CHECK(pearson(V{3, 1, 4, 1, 5, 9, 2, 6}, V{2, 7, 1, 8, 2, 8, 1, 8}) == doctest::Approx(0.20965531907301216));
  CHECK(spearman(V{3, 1, 4, 1, 5, 9, 2, 6}, V{2, 7, 1, 8, 2, 8, 1, 8}) == doctest::Approx(0.19885368120992467));
}

TEST_CASE("average ranks") {
  const auto r = average_ranks(V{10, 30, 20, 20, 5});
  CHECK(r == V{2, 5, 3.5, 3.5, 1});
  CHECK(average_ranks(V{7, 7, 7}) == V{2, 2, 2});
}

TEST_CASE("r_squared") {
  CHECK(r_squared(V{1, 2, 3}, V{1, 2, 3}) == 1.0);
  CHECK(r_squared(V{1, 2, 3, 4, 5}, V{2, 1, 4, 3, 5}) == doctest::Approx(0.6));
  CHECK(r_squared(V{1, 2, 3}, V{2, 2, 2}) == doctest::Approx(0.0));
  CHECK(r_squared(V{1, 2, 3}, V{3, 2, 1}) == doctest::Approx(-3.0));
}

TEST_CASE("error paths") {
  CHECK_THROWS_AS(pearson(V{1, 2}, V{1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(pearson(V{1}, V{1}), std::invalid_argument);
  CHECK_THROWS_AS(pearson(V{1, 1, 1}, V{1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(pearson(V{0.1, 0.1, 0.1}, V{1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(spearman(V{1, 2, 3}, V{4, 4, 4}), std::invalid_argument);
  CHECK_THROWS_AS(r_squared(V{2, 2}, V{1, 3}), std::invalid_argument);
}

TEST_CASE("property: bounds and invariance under transforms") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    V x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = std::round(g(rng) * 4.0);  // coarse values produce ties
      y[i] = g(rng) + 0.3 * x[i];
    }
    if (average_ranks(x) == V(n, average_ranks(x)[0])) continue;
    const double s = spearman(x, y);
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);

    const double p = pearson(x, y);
    V xa(n), ym(n);
    for (std::size_t i = 0; i < n; ++i) {
      xa[i] = 2.5 * x[i] + 7.0;
      ym[i] = std::exp(y[i]);  // strictly monotone
    }
    CHECK(pearson(xa, y) == doctest::Approx(p).epsilon(1e-9));
    CHECK(spearman(xa, ym) == doctest::Approx(s).epsilon(1e-12));
  }
}
