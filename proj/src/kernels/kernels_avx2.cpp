// Compiled with -mavx2 -mfma; only reached through the runtime dispatcher
// after the CPU has been checked for both extensions.
#include <immintrin.h>

#include <cmath>

#include "eabr/kernels.hpp"

namespace eabr::kernels::avx2 {

namespace {

constexpr std::size_t kLanes = 4;

// exp(x) for x in the normal range. Cody-Waite reduction by ln2 followed by a
// degree-13 Taylor polynomial on |r| <= ln2/2 (truncation error < 1e-17
// relative). Inputs below -708 flush to zero, above 709 saturate.
inline __m256d exp_pd(__m256d x) {
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d hi = _mm256_set1_pd(709.0);
  const __m256d underflow = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_max_pd(_mm256_min_pd(x, hi), lo);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(0.693145751953125), x);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212e-6), r);

  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);  // 1/13!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  // 2^n via the exponent field.
  const __m256i ni = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n));
  const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(ni, _mm256_set1_epi64x(1023)), 52);
  const __m256d result = _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
  return _mm256_andnot_pd(underflow, result);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

std::size_t vector_end(std::size_t n) { return n - n % kLanes; }

}  // namespace

void eval_model(ModelCoefficients m, std::span<const double> x, std::span<double> out) {
  const __m256d va = _mm256_set1_pd(m.a);
  const __m256d vnb = _mm256_set1_pd(-m.b);
  const __m256d vc = _mm256_set1_pd(m.c);
  const std::size_t end = vector_end(x.size());
  for (std::size_t i = 0; i < end; i += kLanes) {
    const __m256d e = exp_pd(_mm256_mul_pd(vnb, _mm256_loadu_pd(x.data() + i)));
    _mm256_storeu_pd(out.data() + i, _mm256_fmadd_pd(va, e, vc));
  }
  scalar::eval_model(m, x.subspan(end), out.subspan(end));
}

double sum_squared_residuals(ModelCoefficients m, std::span<const double> x, std::span<const double> y) {
  const __m256d va = _mm256_set1_pd(m.a);
  const __m256d vnb = _mm256_set1_pd(-m.b);
  const __m256d vc = _mm256_set1_pd(m.c);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t end = vector_end(x.size());
  for (std::size_t i = 0; i < end; i += kLanes) {
    const __m256d e = exp_pd(_mm256_mul_pd(vnb, _mm256_loadu_pd(x.data() + i)));
    const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(y.data() + i), _mm256_fmadd_pd(va, e, vc));
    acc = _mm256_fmadd_pd(r, r, acc);
  }
  return hsum(acc) + scalar::sum_squared_residuals(m, x.subspan(end), y.subspan(end));
}

NormalEquations normal_equations(ModelCoefficients m, std::span<const double> x, std::span<const double> y) {
  const __m256d va = _mm256_set1_pd(m.a);
  const __m256d vnb = _mm256_set1_pd(-m.b);
  const __m256d vc = _mm256_set1_pd(m.c);
  const __m256d vna = _mm256_set1_pd(-m.a);
  __m256d ssr = _mm256_setzero_pd(), aa = ssr, ab = ssr, ac = ssr, bb = ssr, bc = ssr, ra = ssr, rb = ssr, rc = ssr;
  const std::size_t end = vector_end(x.size());
  for (std::size_t i = 0; i < end; i += kLanes) {
    const __m256d xv = _mm256_loadu_pd(x.data() + i);
    const __m256d e = exp_pd(_mm256_mul_pd(vnb, xv));
    const __m256d r = _mm256_sub_pd(_mm256_loadu_pd(y.data() + i), _mm256_fmadd_pd(va, e, vc));
    const __m256d jb = _mm256_mul_pd(_mm256_mul_pd(vna, xv), e);
    ssr = _mm256_fmadd_pd(r, r, ssr);
    aa = _mm256_fmadd_pd(e, e, aa);
    ab = _mm256_fmadd_pd(e, jb, ab);
    ac = _mm256_add_pd(e, ac);
    bb = _mm256_fmadd_pd(jb, jb, bb);
    bc = _mm256_add_pd(jb, bc);
    ra = _mm256_fmadd_pd(e, r, ra);
    rb = _mm256_fmadd_pd(jb, r, rb);
    rc = _mm256_add_pd(r, rc);
  }
  auto ne = scalar::normal_equations(m, x.subspan(end), y.subspan(end));
  ne.ssr += hsum(ssr);
  const double saa = ne.jtj[0] + hsum(aa);
  const double sab = ne.jtj[1] + hsum(ab);
  const double sac = ne.jtj[2] + hsum(ac);
  const double sbb = ne.jtj[4] + hsum(bb);
  const double sbc = ne.jtj[5] + hsum(bc);
  const double scc = ne.jtj[8] + static_cast<double>(end);
  ne.jtj = {saa, sab, sac, sab, sbb, sbc, sac, sbc, scc};
  ne.jtr[0] += hsum(ra);
  ne.jtr[1] += hsum(rb);
  ne.jtr[2] += hsum(rc);
  return ne;
}

double sum(std::span<const double> x) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t end = vector_end(x.size());
  for (std::size_t i = 0; i < end; i += kLanes) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x.data() + i));
  return hsum(acc) + scalar::sum(x.subspan(end));
}

Moments centered_moments(std::span<const double> x, std::span<const double> y, double mean_x, double mean_y) {
  const __m256d mx = _mm256_set1_pd(mean_x);
  const __m256d my = _mm256_set1_pd(mean_y);
  __m256d sxx = _mm256_setzero_pd(), syy = sxx, sxy = sxx;
  const std::size_t end = vector_end(x.size());
  for (std::size_t i = 0; i < end; i += kLanes) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), mx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(y.data() + i), my);
    sxx = _mm256_fmadd_pd(dx, dx, sxx);
    syy = _mm256_fmadd_pd(dy, dy, syy);
    sxy = _mm256_fmadd_pd(dx, dy, sxy);
  }
  auto m = scalar::centered_moments(x.subspan(end), y.subspan(end), mean_x, mean_y);
  m.sxx += hsum(sxx);
  m.syy += hsum(syy);
  m.sxy += hsum(sxy);
  return m;
}

}  // namespace eabr::kernels::avx2
