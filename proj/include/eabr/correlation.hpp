#pragma once

#include <span>
#include <vector>

namespace eabr {

// Pearson product-moment correlation. Throws std::invalid_argument on length
// mismatch, fewer than two samples, or zero variance in either input.
double pearson(std::span<const double> x, std::span<const double> y);

// Spearman rank correlation: Pearson correlation of average (fractional)
// ranks, so tied values share the mean of the ranks they span.
double spearman(std::span<const double> x, std::span<const double> y);

// Coefficient of determination 1 - SS_res/SS_tot of `predicted` against
// `observed`. Throws std::invalid_argument when SS_tot is zero.
double r_squared(std::span<const double> observed, std::span<const double> predicted);

// 1-based average ranks.
std::vector<double> average_ranks(std::span<const double> values);

}  // namespace eabr
