#include <algorithm>
#include <cmath>

#include "surfrep/kernels.hpp"

namespace surfrep::kern {

namespace {

void step4_scalar(double* s0, double* s1, double* s2, double* s3,
                  const double* g0, const double* g1, const double* g2,
                  const double* g3, double cos_t, double sin_t,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
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

void step3_scalar(double* s0, double* s1, double* s2, const double* g0,
                  const double* g1, const double* g2, double cos_t,
                  double sin_t, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
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

void minmax_scalar(const double* x, std::size_t n, double* lo, double* hi) {
  double mn = x[0], mx = x[0];
  for (std::size_t i = 1; i < n; ++i) {
    mn = std::min(mn, x[i]);
    mx = std::max(mx, x[i]);
  }
  *lo = mn;
  *hi = mx;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {step4_scalar, step3_scalar, minmax_scalar, "scalar"};
  return ops;
}

}  // namespace surfrep::kern
