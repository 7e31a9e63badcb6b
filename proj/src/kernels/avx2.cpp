#include "surfrep/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace surfrep::kern {

namespace {

inline __m256d project(__m256d g, __m256d s, __m256d d) {
  return _mm256_fnmadd_pd(d, s, g);  // g - d*s
}

void step4_avx2(double* s0, double* s1, double* s2, double* s3,
                const double* g0, const double* g1, const double* g2,
                const double* g3, double cos_t, double sin_t, std::size_t n) {
  const __m256d ct = _mm256_set1_pd(cos_t);
  const __m256d st = _mm256_set1_pd(sin_t);
  const __m256d tiny = _mm256_set1_pd(1e-300);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d a0 = _mm256_loadu_pd(s0 + i), a1 = _mm256_loadu_pd(s1 + i);
    __m256d a2 = _mm256_loadu_pd(s2 + i), a3 = _mm256_loadu_pd(s3 + i);
    const __m256d b0 = _mm256_loadu_pd(g0 + i), b1 = _mm256_loadu_pd(g1 + i);
    const __m256d b2 = _mm256_loadu_pd(g2 + i), b3 = _mm256_loadu_pd(g3 + i);
    __m256d d = _mm256_mul_pd(b0, a0);
    d = _mm256_fmadd_pd(b1, a1, d);
    d = _mm256_fmadd_pd(b2, a2, d);
    d = _mm256_fmadd_pd(b3, a3, d);
    const __m256d w0 = project(b0, a0, d), w1 = project(b1, a1, d);
    const __m256d w2 = project(b2, a2, d), w3 = project(b3, a3, d);
    __m256d q = _mm256_mul_pd(w0, w0);
    q = _mm256_fmadd_pd(w1, w1, q);
    q = _mm256_fmadd_pd(w2, w2, q);
    q = _mm256_fmadd_pd(w3, w3, q);
    const __m256d nrm = _mm256_max_pd(_mm256_sqrt_pd(q), tiny);
    const __m256d f = _mm256_div_pd(st, nrm);
    a0 = _mm256_fmadd_pd(ct, a0, _mm256_mul_pd(f, w0));
    a1 = _mm256_fmadd_pd(ct, a1, _mm256_mul_pd(f, w1));
    a2 = _mm256_fmadd_pd(ct, a2, _mm256_mul_pd(f, w2));
    a3 = _mm256_fmadd_pd(ct, a3, _mm256_mul_pd(f, w3));
    _mm256_storeu_pd(s0 + i, a0);
    _mm256_storeu_pd(s1 + i, a1);
    _mm256_storeu_pd(s2 + i, a2);
    _mm256_storeu_pd(s3 + i, a3);
  }
  for (; i < n; ++i) {
    const double d =
        g0[i] * s0[i] + g1[i] * s1[i] + g2[i] * s2[i] + g3[i] * s3[i];
    const double w0 = g0[i] - d * s0[i];
    const double w1 = g1[i] - d * s1[i];
    const double w2 = g2[i] - d * s2[i];
    const double w3 = g3[i] - d * s3[i];
    const double nrm = std::sqrt(w0 * w0 + w1 * w1 + w2 * w2 + w3 * w3);
    const double f = sin_t / std::max(nrm, 1e-300);
    s0[i] = cos_t * s0[i] + f * w0;
    s1[i] = cos_t * s1[i] + f * w1;
    s2[i] = cos_t * s2[i] + f * w2;
    s3[i] = cos_t * s3[i] + f * w3;
  }
}

void step3_avx2(double* s0, double* s1, double* s2, const double* g0,
                const double* g1, const double* g2, double cos_t,
                double sin_t, std::size_t n) {
  const __m256d ct = _mm256_set1_pd(cos_t);
  const __m256d st = _mm256_set1_pd(sin_t);
  const __m256d tiny = _mm256_set1_pd(1e-300);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d a0 = _mm256_loadu_pd(s0 + i), a1 = _mm256_loadu_pd(s1 + i);
    __m256d a2 = _mm256_loadu_pd(s2 + i);
    const __m256d b0 = _mm256_loadu_pd(g0 + i), b1 = _mm256_loadu_pd(g1 + i);
    const __m256d b2 = _mm256_loadu_pd(g2 + i);
    __m256d d = _mm256_mul_pd(b0, a0);
    d = _mm256_fmadd_pd(b1, a1, d);
    d = _mm256_fmadd_pd(b2, a2, d);
    const __m256d w0 = project(b0, a0, d), w1 = project(b1, a1, d);
    const __m256d w2 = project(b2, a2, d);
    __m256d q = _mm256_mul_pd(w0, w0);
    q = _mm256_fmadd_pd(w1, w1, q);
    q = _mm256_fmadd_pd(w2, w2, q);
    const __m256d nrm = _mm256_max_pd(_mm256_sqrt_pd(q), tiny);
    const __m256d f = _mm256_div_pd(st, nrm);
    a0 = _mm256_fmadd_pd(ct, a0, _mm256_mul_pd(f, w0));
    a1 = _mm256_fmadd_pd(ct, a1, _mm256_mul_pd(f, w1));
    a2 = _mm256_fmadd_pd(ct, a2, _mm256_mul_pd(f, w2));
    _mm256_storeu_pd(s0 + i, a0);
    _mm256_storeu_pd(s1 + i, a1);
    _mm256_storeu_pd(s2 + i, a2);
  }
  for (; i < n; ++i) {
    const double d = g0[i] * s0[i] + g1[i] * s1[i] + g2[i] * s2[i];
    const double w0 = g0[i] - d * s0[i];
    const double w1 = g1[i] - d * s1[i];
    const double w2 = g2[i] - d * s2[i];
    const double nrm = std::sqrt(w0 * w0 + w1 * w1 + w2 * w2);
    const double f = sin_t / std::max(nrm, 1e-300);
    s0[i] = cos_t * s0[i] + f * w0;
    s1[i] = cos_t * s1[i] + f * w1;
    s2[i] = cos_t * s2[i] + f * w2;
  }
}

void minmax_avx2(const double* x, std::size_t n, double* lo, double* hi) {
  std::size_t i = 0;
  double mn = x[0], mx = x[0];
  if (n >= 4) {
    __m256d vmn = _mm256_loadu_pd(x);
    __m256d vmx = vmn;
    for (i = 4; i + 4 <= n; i += 4) {
      const __m256d v = _mm256_loadu_pd(x + i);
      vmn = _mm256_min_pd(vmn, v);
      vmx = _mm256_max_pd(vmx, v);
    }
    alignas(32) double tmn[4], tmx[4];
    _mm256_store_pd(tmn, vmn);
    _mm256_store_pd(tmx, vmx);
    mn = std::min(std::min(tmn[0], tmn[1]), std::min(tmn[2], tmn[3]));
    mx = std::max(std::max(tmx[0], tmx[1]), std::max(tmx[2], tmx[3]));
  }
  for (; i < n; ++i) {
    mn = std::min(mn, x[i]);
    mx = std::max(mx, x[i]);
  }
  *lo = mn;
  *hi = mx;
}

}  // namespace

const Ops* avx2_ops() {
  static const Ops ops = {step4_avx2, step3_avx2, minmax_avx2, "avx2"};
  return &ops;
}

}  // namespace surfrep::kern

#else

namespace surfrep::kern {
const Ops* avx2_ops() { return nullptr; }
}  // namespace surfrep::kern

#endif
