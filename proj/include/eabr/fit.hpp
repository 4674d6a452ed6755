#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eabr/measurements.hpp"
#include "eabr/model.hpp"

namespace eabr {

struct FitOptions {
  // Asymptote held fixed during fitting; std::nullopt fits c as well.
  std::optional<double> fix_c = 1.0;
  // Keep points with bw_rel < 1 (excluded by default).
  bool include_flagged = false;
  int max_iterations = 200;
  // Converged when the relative objective change drops below this.
  double relative_tolerance = 1e-12;
};

struct FitResult {
  ModelParams params;
  double r_squared = 0.0;
  double pcc = 0.0;
  double srocc = 0.0;
  std::size_t n_points = 0;
  std::size_t n_excluded = 0;
  int iterations = 0;
  double objective = 0.0;  // sum of squared residuals at `params`
  std::vector<std::string> diagnostics;
};

// Least-squares fit of ec_rel = a*exp(-b*bw_rel) + c with a, b >= 0.
// Starts from a log-linear regression of ln(ec_rel - c) on bw_rel and refines
// with damped Gauss-Newton (step halving on objective increase). Throws
// FitError when there are too few usable points, all usable points share one
// bw_rel, or the refinement does not converge within max_iterations.
FitResult fit(std::span<const RelativePoint> points, const FitOptions& options = {});

// Same, on raw (bw_rel, ec_rel) arrays; no points are excluded.
FitResult fit_xy(std::span<const double> bw_rel, std::span<const double> ec_rel, const FitOptions& options = {});

// Sum of squared residuals of `params` on the data.
double fit_objective(const ModelParams& params, std::span<const double> bw_rel, std::span<const double> ec_rel);

}  // namespace eabr
