#pragma once

#include <array>
#include <span>
#include <string_view>

// Data-parallel inner loops of the exponential model: batched evaluation,
// least-squares normal equations, and correlation moments. Each entry point
// has a scalar reference implementation and an AVX2 variant; the active one
// is chosen at startup from the CPU's capabilities and can be overridden.
namespace eabr::kernels {

enum class Backend { kScalar, kAvx2 };

std::string_view to_string(Backend backend);

// Gauss-Newton normal equations for f(x) = a*exp(-b*x) + c with residual
// r = y - f. `jtj` is the full symmetric 3x3 J^T J (row-major, parameter
// order a, b, c) and `jtr` is J^T r.
struct NormalEquations {
  double ssr = 0.0;
  std::array<double, 9> jtj{};
  std::array<double, 3> jtr{};
};

// Centered second moments: sum (x-mx)^2, sum (y-my)^2, sum (x-mx)(y-my).
struct Moments {
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
};

struct ModelCoefficients {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

// out[i] = a*exp(-b*x[i]) + c. Requires out.size() == x.size().
void eval_model(ModelCoefficients m, std::span<const double> x, std::span<double> out);
double sum_squared_residuals(ModelCoefficients m, std::span<const double> x, std::span<const double> y);
NormalEquations normal_equations(ModelCoefficients m, std::span<const double> x, std::span<const double> y);
double sum(std::span<const double> x);
Moments centered_moments(std::span<const double> x, std::span<const double> y, double mean_x, double mean_y);

bool backend_available(Backend backend) noexcept;
Backend best_backend() noexcept;
Backend active_backend() noexcept;
// Throws std::invalid_argument when the backend is not available on this CPU
// or was not compiled in.
void set_backend(Backend backend);

// Direct access to a specific implementation, used for equivalence tests.
namespace scalar {
void eval_model(ModelCoefficients m, std::span<const double> x, std::span<double> out);
double sum_squared_residuals(ModelCoefficients m, std::span<const double> x, std::span<const double> y);
NormalEquations normal_equations(ModelCoefficients m, std::span<const double> x, std::span<const double> y);
double sum(std::span<const double> x);
Moments centered_moments(std::span<const double> x, std::span<const double> y, double mean_x, double mean_y);
}  // namespace scalar

namespace avx2 {
void eval_model(ModelCoefficients m, std::span<const double> x, std::span<double> out);
double sum_squared_residuals(ModelCoefficients m, std::span<const double> x, std::span<const double> y);
NormalEquations normal_equations(ModelCoefficients m, std::span<const double> x, std::span<const double> y);
double sum(std::span<const double> x);
Moments centered_moments(std::span<const double> x, std::span<const double> y, double mean_x, double mean_y);
}  // namespace avx2

}  // namespace eabr::kernels
