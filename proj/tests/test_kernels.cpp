#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "surfrep/kernels.hpp"
#include "surfrep/rng.hpp"
#include "surfrep/types.hpp"

using namespace surfrep;

namespace {

struct LaneGuard {
  kern::Lane saved = kern::forced_lane();
  ~LaneGuard() { kern::force_lane(saved); }
};

std::vector<double> gaussians(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.gaussian();
  return v;
}

void normalize4(std::vector<double>& a, std::vector<double>& b,
                std::vector<double>& c, std::vector<double>& d) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r =
        std::sqrt(a[i] * a[i] + b[i] * b[i] + c[i] * c[i] + d[i] * d[i]);
    a[i] /= r;
    b[i] /= r;
    c[i] /= r;
    d[i] /= r;
  }
}

}  // namespace

TEST_CASE("scalar step4 preserves unit norm and mixes by the step angle") {
  Rng rng(501);
  const std::size_t n = 257;  // odd count exercises the vector tail path
  auto s0 = gaussians(rng, n), s1 = gaussians(rng, n), s2 = gaussians(rng, n),
       s3 = gaussians(rng, n);
  normalize4(s0, s1, s2, s3);
  const auto g0 = gaussians(rng, n), g1 = gaussians(rng, n),
             g2 = gaussians(rng, n), g3 = gaussians(rng, n);
  const double t = 0.37;
  kern::scalar_ops().step4(s0.data(), s1.data(), s2.data(), s3.data(),
                           g0.data(), g1.data(), g2.data(), g3.data(),
                           std::cos(t), std::sin(t), n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r2 =
        s0[i] * s0[i] + s1[i] * s1[i] + s2[i] * s2[i] + s3[i] * s3[i];
    CHECK(std::abs(r2 - 1.0) < 1e-12);
  }
}

TEST_CASE("scalar step3 stays on the symmetric equator") {
  Rng rng(502);
  const std::size_t n = 100;
  auto s0 = gaussians(rng, n), s1 = gaussians(rng, n), s3 = gaussians(rng, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::sqrt(s0[i] * s0[i] + s1[i] * s1[i] + s3[i] * s3[i]);
    s0[i] /= r;
    s1[i] /= r;
    s3[i] /= r;
  }
  const auto g0 = gaussians(rng, n), g1 = gaussians(rng, n),
             g3 = gaussians(rng, n);
  const double t = 1.1;
  kern::scalar_ops().step3(s0.data(), s1.data(), s3.data(), g0.data(),
                           g1.data(), g3.data(), std::cos(t), std::sin(t), n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r2 = s0[i] * s0[i] + s1[i] * s1[i] + s3[i] * s3[i];
    CHECK(std::abs(r2 - 1.0) < 1e-12);
  }
}

TEST_CASE("minmax agrees with the standard algorithm") {
  Rng rng(503);
  for (std::size_t n : {1u, 2u, 7u, 64u, 1001u}) {
    const auto x = gaussians(rng, n);
    double lo = 0, hi = 0;
    kern::scalar_ops().minmax(x.data(), n, &lo, &hi);
    const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    CHECK(lo == *mn);
    CHECK(hi == *mx);
    if (const kern::Ops* v = kern::avx2_ops()) {
      double vlo = 0, vhi = 0;
      v->minmax(x.data(), n, &vlo, &vhi);
      CHECK(vlo == *mn);
      CHECK(vhi == *mx);
    }
  }
}

TEST_CASE("vector lanes match scalar stepwise within FMA rounding") {
  const kern::Ops* v = kern::avx2_ops();
  if (!v) return;  // host without AVX2: dispatch equivalence is vacuous
  Rng rng(504);
  const std::size_t n = 515;
  auto a0 = gaussians(rng, n), a1 = gaussians(rng, n), a2 = gaussians(rng, n),
       a3 = gaussians(rng, n);
  normalize4(a0, a1, a2, a3);
  auto b0 = a0, b1 = a1, b2 = a2, b3 = a3;
  const double t = 0.6;
  for (int it = 0; it < 50; ++it) {
    const auto g0 = gaussians(rng, n), g1 = gaussians(rng, n),
               g2 = gaussians(rng, n), g3 = gaussians(rng, n);
    kern::scalar_ops().step4(a0.data(), a1.data(), a2.data(), a3.data(),
                             g0.data(), g1.data(), g2.data(), g3.data(),
                             std::cos(t), std::sin(t), n);
    v->step4(b0.data(), b1.data(), b2.data(), b3.data(), g0.data(), g1.data(),
             g2.data(), g3.data(), std::cos(t), std::sin(t), n);
  }
  double worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(a0[i] - b0[i]));
    worst = std::max(worst, std::abs(a1[i] - b1[i]));
    worst = std::max(worst, std::abs(a2[i] - b2[i]));
    worst = std::max(worst, std::abs(a3[i] - b3[i]));
  }
  // lanes differ only in FMA rounding; 50 chained steps stay far below any
  // tolerance used by callers
  CHECK(worst < 1e-9);

  auto c0 = a0, c1 = a1, c3 = a3;
  auto d0 = c0, d1 = c1, d3 = c3;
  for (int it = 0; it < 50; ++it) {
    const auto g0 = gaussians(rng, n), g1 = gaussians(rng, n),
               g3 = gaussians(rng, n);
    kern::scalar_ops().step3(c0.data(), c1.data(), c3.data(), g0.data(),
                             g1.data(), g3.data(), std::cos(t), std::sin(t),
                             n);
    v->step3(d0.data(), d1.data(), d3.data(), g0.data(), g1.data(), g3.data(),
             std::cos(t), std::sin(t), n);
  }
  worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(c0[i] - d0[i]));
    worst = std::max(worst, std::abs(c1[i] - d1[i]));
    worst = std::max(worst, std::abs(c3[i] - d3[i]));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("lane dispatch and forcing") {
  LaneGuard guard;
  kern::force_lane(kern::Lane::Scalar);
  CHECK(std::string(kern::lane_name()) == "scalar");
  CHECK(kern::ops().step4 == kern::scalar_ops().step4);
  if (kern::avx2_available()) {
    kern::force_lane(kern::Lane::Avx2);
    CHECK(std::string(kern::lane_name()) == "avx2");
    CHECK(kern::ops().step4 == kern::avx2_ops()->step4);
    kern::force_lane(kern::Lane::Auto);
    CHECK(kern::ops().step4 == kern::avx2_ops()->step4);
  } else {
    CHECK_THROWS_AS(kern::force_lane(kern::Lane::Avx2), PreconditionError);
    kern::force_lane(kern::Lane::Auto);
    CHECK(kern::ops().step4 == kern::scalar_ops().step4);
  }
}
