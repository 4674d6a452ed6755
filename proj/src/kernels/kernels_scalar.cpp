#include <cmath>

#include "eabr/kernels.hpp"

namespace eabr::kernels::scalar {

void eval_model(ModelCoefficients m, std::span<const double> x, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = m.a * std::exp(-m.b * x[i]) + m.c;
}

double sum_squared_residuals(ModelCoefficients m, std::span<const double> x, std::span<const double> y) {
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (m.a * std::exp(-m.b * x[i]) + m.c);
    ssr += r * r;
  }
  return ssr;
}

NormalEquations normal_equations(ModelCoefficients m, std::span<const double> x, std::span<const double> y) {
  double ssr = 0, aa = 0, ab = 0, ac = 0, bb = 0, bc = 0, cc = 0, ra = 0, rb = 0, rc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = std::exp(-m.b * x[i]);
    const double r = y[i] - (m.a * e + m.c);
    const double ja = e;
    const double jb = -m.a * x[i] * e;
    ssr += r * r;
    aa += ja * ja;
    ab += ja * jb;
    ac += ja;
    bb += jb * jb;
    bc += jb;
    cc += 1.0;
    ra += ja * r;
    rb += jb * r;
    rc += r;
  }
  NormalEquations ne;
  ne.ssr = ssr;
  ne.jtj = {aa, ab, ac, ab, bb, bc, ac, bc, cc};
  ne.jtr = {ra, rb, rc};
  return ne;
}

double sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

Moments centered_moments(std::span<const double> x, std::span<const double> y, double mean_x, double mean_y) {
  Moments m;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  return m;
}

}  // namespace eabr::kernels::scalar
