#include <doctest.h>

#include <cmath>

#include "surfrep/lie.hpp"
#include "surfrep/rng.hpp"

using namespace surfrep;

TEST_CASE("tau and tau_minus are involutive anti/auto-morphisms on unitaries") {
  Rng rng(101);
  for (int n : {1, 2, 3, 4}) {
    const Mat u = haar_sample(n, Group::U, rng).m();
    const Mat v = haar_sample(n, Group::U, rng).m();
    CHECK(fnorm(tau(tau(u)) - u) == 0.0);
    CHECK(fnorm(tau_minus(tau_minus(u)) - u) == 0.0);
    CHECK(fnorm(tau(u * v) - tau(u) * tau(v)) < 1e-14);
    CHECK(fnorm(tau_minus(u * v) - tau_minus(v) * tau_minus(u)) < 1e-14);
    // tau_minus agrees with tau composed with inversion on the unitary group
    CHECK(fnorm(tau_minus(u) - tau(u.adjoint())) < 1e-13);
    // fixed points of tau_minus are the symmetric unitaries
    const Mat w = symmetric_unitary_sample(n, Group::U, rng);
    CHECK(fnorm(tau_minus(w) - w) < 1e-11);
  }
}

TEST_CASE("eig_unitary reconstructs and yields unit-modulus spectrum") {
  Rng rng(102);
  for (int n : {1, 2, 3, 5}) {
    const Mat u = haar_sample(n, Group::U, rng).m();
    const UnitaryEig e = eig_unitary(u);
    CHECK(unitary_defect(e.V) < 1e-12);
    CHECK(fnorm(e.V * Mat(e.d.asDiagonal()) * e.V.adjoint() - u) < 1e-12);
    for (int k = 0; k < n; ++k) {
      CHECK(std::abs(std::abs(e.d(k)) - 1.0) < 1e-12);
      CHECK(e.phases(k) >= 0.0);
      CHECK(e.phases(k) < 2 * M_PI);
    }
  }
}

TEST_CASE("phase wrapping and circular differences") {
  CHECK(std::abs(wrap_2pi(-0.1) - (2 * M_PI - 0.1)) < 1e-15);
  CHECK(std::abs(wrap_2pi(2 * M_PI)) < 1e-15);
  CHECK(std::abs(wrap_2pi(7 * M_PI) - M_PI) < 1e-13);
  CHECK(std::abs(circ_diff(0.1, 2 * M_PI - 0.1) - 0.2) < 1e-14);
  CHECK(std::abs(circ_diff(2 * M_PI - 0.1, 0.1) + 0.2) < 1e-14);
  CHECK(std::abs(circ_diff(1.5, 0.5) - 1.0) < 1e-15);
}

TEST_CASE("phase_dist2 finds the best cyclic alignment") {
  RVec a(3), b(3);
  a << 3.0, 2.0, 1.0;
  b << 3.0, 2.0, 1.0;
  int shift = -1;
  CHECK(phase_dist2(a, b, &shift) == 0.0);
  CHECK(shift == 0);

  // same circular multiset, one phase pushed across 0: naive index pairing
  // is far off, the wrapped alignment is within 0.2 per entry
  RVec c(3), d(3);
  c << 6.2, 4.0, 2.0;
  d << 4.0, 2.0, 0.1;
  const double dist2 = phase_dist2(c, d, &shift);
  CHECK(dist2 < 0.04);
  CHECK(shift == 2);
}

TEST_CASE("ClassSpec normalizes, validates, and measures distance") {
  RVec ph(2);
  ph << 0.3, -0.3;
  const ClassSpec s(2, Group::SU, ph);
  CHECK(std::abs(s.phases(0) - (2 * M_PI - 0.3)) < 1e-15);
  CHECK(std::abs(s.phases(1) - 0.3) < 1e-15);
  CHECK(spec_distance(s.diag(), s) < 1e-14);

  RVec bad(2);
  bad << 0.3, 0.4;
  CHECK_THROWS_AS(ClassSpec(2, Group::SU, bad), ValidationError);

  Rng rng(103);
  const Mat k = haar_sample(2, Group::SU, rng).m();
  CHECK(spec_distance(k * s.diag() * k.adjoint(), s) < 1e-12);

  RVec deg(2);
  deg << 1.0, 1.0 + 1e-9;
  CHECK(ClassSpec(2, Group::U, deg).has_degenerate_phases());
  CHECK(!s.has_degenerate_phases());
}

TEST_CASE("project_to_class lands on the class near the input") {
  Rng rng(104);
  for (int n : {2, 3}) {
    RVec ph(n);
    for (int j = 0; j < n; ++j) ph(j) = 0.4 + 0.9 * j;
    const ClassSpec spec(n, Group::U, ph);
    const Mat k = haar_sample(n, Group::U, rng).m();
    const Mat c = k * spec.diag() * k.adjoint();
    const Mat noise = 1e-3 * haar_sample(n, Group::U, rng).m();
    const ProjectResult pr = project_to_class(c + noise, spec);
    CHECK(!pr.degenerate);
    CHECK(spec_distance(pr.u, spec) < 1e-10);
    CHECK(fnorm(pr.u - c) < 0.05);
  }
}

TEST_CASE("takagi_sqrt: the factor is symmetric unitary with A^T A = w") {
  Rng rng(105);
  for (int n : {1, 2, 3, 4, 6}) {
    for (int rep = 0; rep < 10; ++rep) {
      const Mat w = symmetric_unitary_sample(n, Group::U, rng);
      const Mat a = takagi_sqrt(w);
      CHECK(unitary_defect(a) < 1e-11);
      CHECK(sym_defect(a) < 1e-11);
      CHECK(fnorm(a.transpose() * a - w) < 1e-10);
    }
  }
  // determinism on identical input
  Rng r2(106);
  const Mat w = symmetric_unitary_sample(3, Group::U, r2);
  CHECK(fnorm(takagi_sqrt(w) - takagi_sqrt(w)) == 0.0);
  // non-symmetric unitary input is rejected
  Rng r3(107);
  const Mat u = haar_sample(3, Group::U, r3).m();
  CHECK_THROWS_AS(takagi_sqrt(u), PreconditionError);
  // non-unitary input fails validation before factoring
  CHECK_THROWS_AS(takagi_sqrt(u + Mat::Identity(3, 3)), ValidationError);
}

TEST_CASE("takagi_factor exposes the orthogonal frame and half-open phases") {
  Rng rng(111);
  const Mat w = symmetric_unitary_sample(4, Group::U, rng);
  const TakagiFactor f = takagi_factor(w);
  CHECK((f.O.transpose() * f.O - RMat::Identity(4, 4)).norm() < 1e-11);
  Mat phase = Mat::Zero(4, 4);
  for (int j = 0; j < 4; ++j) phase(j, j) = std::exp(Cplx(0, f.lambda(j)));
  const Mat o = f.O.cast<Cplx>();
  CHECK(fnorm(o * phase * o.transpose() - w) < 1e-10);
  for (int j = 0; j < 4; ++j) {
    CHECK(f.lambda(j) >= 0.0);
    CHECK(f.lambda(j) < 2 * M_PI);
  }
}

TEST_CASE("exp maps: expm_skew and expi_realsym with derivative") {
  Rng rng(108);
  for (int n : {2, 3}) {
    const Mat x = skew_sample(n, Group::U, rng);
    CHECK(unitary_defect(expm_skew(x)) < 1e-12);

    RMat s(n, n), ds(n, n);
    for (int p = 0; p < n; ++p)
      for (int q = p; q < n; ++q) {
        s(p, q) = s(q, p) = rng.gaussian();
        ds(p, q) = ds(q, p) = rng.gaussian();
      }
    const Mat w = expi_realsym(s);
    CHECK(unitary_defect(w) < 1e-12);
    CHECK(sym_defect(w) < 1e-12);

    const auto [val, diff] = dexpi_realsym(s, ds);
    CHECK(fnorm(val - w) < 1e-12);
    const double h = 1e-6;
    const Mat fd = (expi_realsym(s + h * ds) - expi_realsym(s - h * ds)) / (2 * h);
    CHECK(fnorm(diff - fd) < 5e-7);
  }
}

TEST_CASE("samplers honor the group tag and are seed-deterministic") {
  Rng a(109), b(109);
  for (int n : {1, 2, 4}) {
    const Mat ua = haar_sample(n, Group::U, a).m();
    const Mat ub = haar_sample(n, Group::U, b).m();
    CHECK(fnorm(ua - ub) == 0.0);
    const Mat su = haar_sample(n, Group::SU, a).m();
    CHECK(std::abs(su.determinant() - Cplx(1, 0)) < 1e-12);
    haar_sample(n, Group::SU, b);
  }
  Rng rng(110);
  const RMat q = haar_orthogonal(3, rng);
  CHECK((q.transpose() * q - RMat::Identity(3, 3)).norm() < 1e-12);

  const Mat w = symmetric_unitary_sample(3, Group::SU, rng);
  CHECK(sym_defect(w) < 1e-12);
  CHECK(std::abs(w.determinant() - Cplx(1, 0)) < 1e-12);

  RVec ph(2);
  ph << 1.1, -1.1;
  const ClassSpec spec(2, Group::SU, ph);
  const Mat c = symmetric_class_sample(spec, rng);
  CHECK(sym_defect(c) < 1e-11);
  CHECK(spec_distance(c, spec) < 1e-11);

  const Mat sk = skew_sample(3, Group::SU, rng);
  CHECK(skew_defect(sk) < 1e-14);
  CHECK(std::abs(sk.trace()) < 1e-14);
}

TEST_CASE("algebra_basis spans the right dimension and is skew") {
  for (int n : {1, 2, 3}) {
    const auto bu = algebra_basis(n, Group::U);
    CHECK(static_cast<int>(bu.size()) == n * n);
    const auto bsu = algebra_basis(n, Group::SU);
    CHECK(static_cast<int>(bsu.size()) == n * n - 1);
    for (const Mat& e : bu) CHECK(skew_defect(e) < 1e-14);
    for (const Mat& e : bsu) {
      CHECK(skew_defect(e) < 1e-14);
      CHECK(std::abs(e.trace()) < 1e-14);
    }
  }
}

TEST_CASE("alcove_project: SU(2) angle and U(n) sorted phases") {
  Rng rng(112);
  RVec ph(2);
  ph << 0.7, -0.7;
  const ClassSpec spec(2, Group::SU, ph);
  const Mat k = haar_sample(2, Group::SU, rng).m();
  const AlcovePoint p = alcove_project(k * spec.diag() * k.adjoint(), Group::SU);
  CHECK(std::abs(p.angle() - 0.7) < 1e-12);

  const Mat u = haar_sample(3, Group::U, rng).m();
  const AlcovePoint q = alcove_project(u, Group::U);
  for (int j = 0; j + 1 < 3; ++j) CHECK(q.theta(j) >= q.theta(j + 1));
  CHECK(q.theta(0) < 2 * M_PI);
  CHECK(q.theta(2) >= 0.0);
}
