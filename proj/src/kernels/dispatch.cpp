#include <atomic>
#include <stdexcept>

#include "eabr/kernels.hpp"

namespace eabr::kernels {

#ifndef EABR_HAVE_AVX2
namespace avx2 {
namespace {
[[noreturn]] void unavailable() { throw std::invalid_argument("AVX2 kernels were not compiled in"); }
}  // namespace
void eval_model(ModelCoefficients, std::span<const double>, std::span<double>) { unavailable(); }
double sum_squared_residuals(ModelCoefficients, std::span<const double>, std::span<const double>) { unavailable(); }
NormalEquations normal_equations(ModelCoefficients, std::span<const double>, std::span<const double>) {
  unavailable();
}
double sum(std::span<const double>) { unavailable(); }
Moments centered_moments(std::span<const double>, std::span<const double>, double, double) { unavailable(); }
}  // namespace avx2
#endif

namespace {

struct Table {
  Backend backend;
  void (*eval_model)(ModelCoefficients, std::span<const double>, std::span<double>);
  double (*sum_squared_residuals)(ModelCoefficients, std::span<const double>, std::span<const double>);
  NormalEquations (*normal_equations)(ModelCoefficients, std::span<const double>, std::span<const double>);
  double (*sum)(std::span<const double>);
  Moments (*centered_moments)(std::span<const double>, std::span<const double>, double, double);
};

constexpr Table kScalar{Backend::kScalar,      scalar::eval_model, scalar::sum_squared_residuals,
                        scalar::normal_equations, scalar::sum,     scalar::centered_moments};
constexpr Table kAvx2{Backend::kAvx2,        avx2::eval_model, avx2::sum_squared_residuals,
                      avx2::normal_equations, avx2::sum,       avx2::centered_moments};

const Table* table_for(Backend b) { return b == Backend::kAvx2 ? &kAvx2 : &kScalar; }

std::atomic<const Table*>& active() {
  static std::atomic<const Table*> table{table_for(best_backend())};
  return table;
}

const Table& current() { return *active().load(std::memory_order_acquire); }

}  // namespace

std::string_view to_string(Backend backend) { return backend == Backend::kAvx2 ? "avx2" : "scalar"; }

bool backend_available(Backend backend) noexcept {
  if (backend == Backend::kScalar) return true;
#if defined(EABR_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend best_backend() noexcept { return backend_available(Backend::kAvx2) ? Backend::kAvx2 : Backend::kScalar; }

Backend active_backend() noexcept { return current().backend; }

void set_backend(Backend backend) {
  if (!backend_available(backend)) {
    throw std::invalid_argument("kernel backend '" + std::string(to_string(backend)) + "' is not available");
  }
  active().store(table_for(backend), std::memory_order_release);
}

void eval_model(ModelCoefficients m, std::span<const double> x, std::span<double> out) {
  if (out.size() != x.size()) throw std::invalid_argument("eval_model: output size mismatch");
  current().eval_model(m, x, out);
}

double sum_squared_residuals(ModelCoefficients m, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("sum_squared_residuals: size mismatch");
  return current().sum_squared_residuals(m, x, y);
}

NormalEquations normal_equations(ModelCoefficients m, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("normal_equations: size mismatch");
  return current().normal_equations(m, x, y);
}

double sum(std::span<const double> x) { return current().sum(x); }

Moments centered_moments(std::span<const double> x, std::span<const double> y, double mean_x, double mean_y) {
  if (x.size() != y.size()) throw std::invalid_argument("centered_moments: size mismatch");
  return current().centered_moments(x, y, mean_x, mean_y);
}

}  // namespace eabr::kernels
