#include "eabr/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "eabr/correlation.hpp"
#include "eabr/error.hpp"
#include "eabr/kernels.hpp"

namespace eabr {

namespace {

constexpr double kLogFloor = 1e-9;  // ln(y - c) only for y > c + kLogFloor
constexpr int kMaxHalvings = 60;

// Parameter vector (a, b[, c]).
struct Theta {
  std::array<double, 3> v{};
  std::size_t k = 2;
  double fixed_c = 1.0;

  kernels::ModelCoefficients coeffs() const { return {v[0], v[1], k == 3 ? v[2] : fixed_c}; }
  ModelParams params() const { return {v[0], v[1], k == 3 ? v[2] : fixed_c}; }
};

// Solves the k x k system in place by Gaussian elimination with partial
// pivoting. Rows with a vanishing pivot get a zero step.
std::array<double, 3> solve(std::array<double, 9> m, std::array<double, 3> rhs, std::size_t k,
                            const std::array<bool, 3>& frozen) {
  std::array<double, 3> x{};
  std::array<std::size_t, 3> idx{};
  std::size_t n = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!frozen[i]) idx[n++] = i;
  }
  std::array<double, 9> a{};
  std::array<double, 3> b{};
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = rhs[idx[i]];
    for (std::size_t j = 0; j < n; ++j) a[i * 3 + j] = m[idx[i] * 3 + idx[j]];
  }
  std::array<bool, 3> dead{};
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * 3 + col]) > std::abs(a[piv * 3 + col])) piv = r;
    }
    if (std::abs(a[piv * 3 + col]) < 1e-300) {
      dead[col] = true;
      continue;
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[piv * 3 + j], a[col * 3 + j]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * 3 + col] / a[col * 3 + col];
      for (std::size_t j = col; j < n; ++j) a[r * 3 + j] -= f * a[col * 3 + j];
      b[r] -= f * b[col];
    }
  }
  std::array<double, 3> y{};
  for (std::size_t i = n; i-- > 0;) {
    if (dead[i]) continue;
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i * 3 + j] * y[j];
    y[i] = s / a[i * 3 + i];
  }
  for (std::size_t i = 0; i < n; ++i) x[idx[i]] = std::isfinite(y[i]) ? y[i] : 0.0;
  return x;
}

Theta project(Theta t) {
  t.v[0] = std::max(t.v[0], 0.0);
  t.v[1] = std::max(t.v[1], 0.0);
  return t;
}

// Log-linear start: regress ln(y - c) on x over points above the asymptote.
std::optional<Theta> log_linear_start(std::span<const double> x, std::span<const double> y, double c, Theta base) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] <= c + kLogFloor) continue;
    const double ly = std::log(y[i] - c);
    sx += x[i];
    sy += ly;
    sxx += x[i] * x[i];
    sxy += x[i] * ly;
    xmin = std::min(xmin, x[i]);
    xmax = std::max(xmax, x[i]);
    ++n;
  }
  if (n < 2 || xmin == xmax) return std::nullopt;
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  if (denom <= 0) return std::nullopt;
  const double slope = (dn * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / dn;
  base.v[0] = std::exp(intercept);
  base.v[1] = std::max(-slope, 0.0);
  if (base.k == 3) base.v[2] = c;
  if (!std::isfinite(base.v[0])) return std::nullopt;
  return project(base);
}

// For a fixed b the model is linear in a (and c); returns the best start over
// a log-spaced grid of b values.
Theta profile_scan_start(std::span<const double> x, std::span<const double> y, Theta base) {
  Theta best = base;
  double best_f = std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(x.size());
  for (int i = -1; i < 100; ++i) {
    const double b = i < 0 ? 0.0 : std::pow(10.0, -3.0 + 5.0 * i / 99.0);
    double se = 0, see = 0, sy = 0, sey = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double e = std::exp(-b * x[j]);
      se += e;
      see += e * e;
      sy += y[j];
      sey += e * y[j];
    }
    Theta t = base;
    t.v[1] = b;
    if (base.k == 2) {
      t.v[0] = see > 0 ? std::max((sey - base.fixed_c * se) / see, 0.0) : 0.0;
    } else {
      const double det = n * see - se * se;
      double a = det > 1e-14 * n * see ? (n * sey - se * sy) / det : 0.0;
      a = std::max(a, 0.0);
      t.v[0] = a;
      t.v[2] = (sy - a * se) / n;
    }
    const double f = kernels::sum_squared_residuals(t.coeffs(), x, y);
    if (f < best_f) {
      best_f = f;
      best = t;
    }
  }
  return best;
}

void fill_metrics(FitResult& r, std::span<const double> x, std::span<const double> y) {
  std::vector<double> pred(x.size());
  kernels::eval_model({r.params.a, r.params.b, r.params.c}, x, pred);
  r.objective = kernels::sum_squared_residuals({r.params.a, r.params.b, r.params.c}, x, y);

  const auto [ylo, yhi] = std::minmax_element(y.begin(), y.end());
  if (*ylo == *yhi) {
    r.r_squared = 0.0;
    r.diagnostics.emplace_back("observations are constant (SS_tot = 0); r_squared reported as 0");
  } else {
    r.r_squared = eabr::r_squared(y, pred);
  }
  const auto [plo, phi] = std::minmax_element(pred.begin(), pred.end());
  if (*ylo == *yhi || *plo == *phi) {
    r.pcc = 0.0;
    r.srocc = 0.0;
    r.diagnostics.emplace_back("observed or predicted values have zero variance; pcc and srocc reported as 0");
  } else {
    r.pcc = pearson(y, pred);
    r.srocc = spearman(y, pred);
  }
}

}  // namespace

double fit_objective(const ModelParams& params, std::span<const double> bw_rel, std::span<const double> ec_rel) {
  return kernels::sum_squared_residuals({params.a, params.b, params.c}, bw_rel, ec_rel);
}

FitResult fit_xy(std::span<const double> x, std::span<const double> y, const FitOptions& options) {
  if (x.size() != y.size()) throw std::invalid_argument("fit: bw_rel and ec_rel lengths differ");
  const bool free_c = !options.fix_c.has_value();
  const std::size_t min_points = free_c ? 3 : 2;
  if (x.size() < min_points) {
    throw FitError(FitError::Kind::kTooFewPoints,
                   fmt::format("fit needs at least {} usable points, got {}", min_points, x.size()));
  }
  const auto [xlo, xhi] = std::minmax_element(x.begin(), x.end());
  if (*xlo == *xhi) {
    throw FitError(FitError::Kind::kUnidentifiable, "all points share the same bw_rel; b is unidentifiable");
  }

  FitResult result;
  result.n_points = x.size();

  Theta base;
  base.k = free_c ? 3 : 2;
  base.fixed_c = options.fix_c.value_or(0.0);

  const auto [ylo, yhi] = std::minmax_element(y.begin(), y.end());
  if (*ylo == *yhi) {
    // Constant observations: the flat model reproduces them exactly.
    if (free_c) {
      result.params = {0.0, 0.0, *ylo};
    } else {
      result.params = {std::max(*ylo - base.fixed_c, 0.0), 0.0, base.fixed_c};
    }
    result.diagnostics.emplace_back("degenerate fit on constant observations");
    fill_metrics(result, x, y);
    return result;
  }

  const double c_start = free_c ? *ylo - 0.05 * (*yhi - *ylo) : base.fixed_c;
  Theta theta = profile_scan_start(x, y, base);
  if (auto lin = log_linear_start(x, y, c_start, base)) {
    if (kernels::sum_squared_residuals(lin->coeffs(), x, y) <= kernels::sum_squared_residuals(theta.coeffs(), x, y)) {
      theta = *lin;
    }
  }

  bool converged = false;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    const auto ne = kernels::normal_equations(theta.coeffs(), x, y);
    const double f = ne.ssr;
    if (f == 0.0) {
      converged = true;
      break;
    }
    auto jtj = ne.jtj;
    for (std::size_t i = 0; i < theta.k; ++i) jtj[i * 3 + i] *= 1.0 + 1e-12;

    std::array<bool, 3> frozen{};
    auto step = solve(jtj, ne.jtr, theta.k, frozen);
    // Parameters sitting on their lower bound and pushed outward are dropped
    // from the system.
    bool refrozen = false;
    for (std::size_t i = 0; i < 2; ++i) {
      if (theta.v[i] <= 0.0 && step[i] < 0.0) {
        frozen[i] = true;
        refrozen = true;
      }
    }
    if (refrozen) step = solve(jtj, ne.jtr, theta.k, frozen);

    double scale = 1.0;
    bool accepted = false;
    Theta candidate = theta;
    double f_new = f;
    for (int h = 0; h < kMaxHalvings; ++h, scale *= 0.5) {
      candidate = theta;
      for (std::size_t i = 0; i < theta.k; ++i) candidate.v[i] += scale * step[i];
      candidate = project(candidate);
      f_new = kernels::sum_squared_residuals(candidate.coeffs(), x, y);
      if (f_new < f) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      converged = true;
      break;
    }
    theta = candidate;
    if ((f - f_new) / f < options.relative_tolerance) {
      ++iter;
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw FitError(FitError::Kind::kDivergence,
                   fmt::format("fit did not converge within {} iterations", options.max_iterations));
  }

  result.params = theta.params();
  result.iterations = iter;
  fill_metrics(result, x, y);
  return result;
}

FitResult fit(std::span<const RelativePoint> points, const FitOptions& options) {
  std::vector<double> x;
  std::vector<double> y;
  std::size_t excluded = 0;
  for (const auto& p : points) {
    if (p.flagged && !options.include_flagged) {
      ++excluded;
      continue;
    }
    x.push_back(p.bw_rel);
    y.push_back(p.ec_rel);
  }
  auto result = fit_xy(x, y, options);
  result.n_excluded = excluded;
  if (excluded > 0) result.diagnostics.push_back(fmt::format("{} point(s) with bw_rel < 1 excluded", excluded));
  return result;
}

}  // namespace eabr
