#include "eabr/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "eabr/kernels.hpp"

namespace eabr {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y, const char* what) {
  if (x.size() != y.size()) throw std::invalid_argument(std::string(what) + ": length mismatch");
  if (x.size() < 2) throw std::invalid_argument(std::string(what) + ": need at least two samples");
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, "pearson");
  const auto constant = [](std::span<const double> v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo == *hi;
  };
  if (constant(x) || constant(y)) throw std::invalid_argument("pearson: zero variance input");
  const double n = static_cast<double>(x.size());
  const auto m = kernels::centered_moments(x, y, kernels::sum(x) / n, kernels::sum(y) / n);
  return std::clamp(m.sxy / std::sqrt(m.sxx * m.syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });

  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 hold ranks i+1..j
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, "spearman");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double r_squared(std::span<const double> observed, std::span<const double> predicted) {
  check_pair(observed, predicted, "r_squared");
  const double mean = kernels::sum(observed) / static_cast<double>(observed.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    ss_res += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
    ss_tot += (observed[i] - mean) * (observed[i] - mean);
  }
  if (ss_tot == 0.0) throw std::invalid_argument("r_squared: observations have zero variance");
  return 1.0 - ss_res / ss_tot;
}

}  // namespace eabr
