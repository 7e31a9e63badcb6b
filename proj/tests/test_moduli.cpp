#include <doctest.h>

#include <cmath>
#include <vector>

#include "surfrep/moduli.hpp"

using namespace surfrep;

namespace {

std::vector<ClassSpec> su2_specs(const std::vector<double>& angles) {
  std::vector<ClassSpec> specs;
  for (double t : angles) {
    RVec ph(2);
    ph << t, -t;
    specs.emplace_back(2, Group::SU, ph);
  }
  return specs;
}

}  // namespace

TEST_CASE("su2_interval_exact: frozen cases") {
  // independent hand-folded values
  const Interval a = su2_interval_exact({M_PI / 2, M_PI / 2});
  CHECK(a.lo == doctest::Approx(0.0).epsilon(1e-12).scale(1));
  CHECK(a.hi == doctest::Approx(M_PI).epsilon(1e-12).scale(1));
  const Interval b = su2_interval_exact({0.3, 1.2});
  CHECK(b.lo == doctest::Approx(0.9).epsilon(1e-12).scale(1));
  CHECK(b.hi == doctest::Approx(1.5).epsilon(1e-12).scale(1));
  const Interval c = su2_interval_exact({0.2, 0.3});
  CHECK(c.lo == doctest::Approx(0.1).epsilon(1e-12).scale(1));
  CHECK(c.hi == doctest::Approx(0.5).epsilon(1e-12).scale(1));
  // wrap past pi: hi saturates at 2pi - sum reflected into [0, pi]
  const Interval d = su2_interval_exact({2.0, 2.0});
  CHECK(d.lo == doctest::Approx(0.0).epsilon(1e-12).scale(1));
  CHECK(d.hi == doctest::Approx(2 * M_PI - 4.0).epsilon(1e-12).scale(1));
  const Interval e = su2_interval_exact({1.0});
  CHECK(e.lo == doctest::Approx(1.0));
  CHECK(e.hi == doctest::Approx(1.0));
}

TEST_CASE("su2_interval_oracle brackets the exact interval") {
  for (const auto& angles :
       {std::vector<double>{M_PI / 2, M_PI / 2}, {0.3, 1.2}, {0.2, 0.3},
        {1.0, 2.0, 2.5}}) {
    const Interval ex = su2_interval_exact(angles);
    const Interval mc = su2_interval_oracle(angles, 200000, 42);
    CHECK(mc.lo >= ex.lo - 1e-9);
    CHECK(mc.hi <= ex.hi + 1e-9);
    CHECK(mc.lo <= ex.lo + 0.05);
    CHECK(mc.hi >= ex.hi - 0.05);
  }
}

TEST_CASE("polytope_sample_su2 clouds stay inside and fill the interval") {
  for (bool beta_fixed : {false, true}) {
    CAPTURE(beta_fixed);
    const std::vector<double> angles = {0.5, 0.9, 0.1};
    const PolytopeCloud cloud = polytope_sample_su2(angles, 20000, beta_fixed, 7);
    const Interval ex = su2_interval_exact(angles);
    CHECK(static_cast<int>(cloud.angles.size()) == 20000);
    CHECK(cloud.lo >= ex.lo - 1e-9);
    CHECK(cloud.hi <= ex.hi + 1e-9);
    // both strata have full-dimensional image: hulls close to the interval
    CHECK(cloud.lo <= ex.lo + 0.05);
    CHECK(cloud.hi >= ex.hi - 0.05);
    for (double t : cloud.angles) {
      CHECK(t >= 0.0);
      CHECK(t <= M_PI);
    }
  }
}

TEST_CASE("polytope_sample_su2 is seed-deterministic per lane") {
  const std::vector<double> angles = {0.5, 0.9};
  const PolytopeCloud a = polytope_sample_su2(angles, 4096, true, 11);
  const PolytopeCloud b = polytope_sample_su2(angles, 4096, true, 11);
  REQUIRE(a.angles.size() == b.angles.size());
  for (size_t i = 0; i < a.angles.size(); ++i) CHECK(a.angles[i] == b.angles[i]);
  CHECK(a.lane == b.lane);
  const PolytopeCloud c = polytope_sample_su2(angles, 4096, true, 12);
  bool differs = false;
  for (size_t i = 0; i < c.angles.size() && !differs; ++i)
    differs = (a.angles[i] != c.angles[i]);
  CHECK(differs);
}

TEST_CASE("feasibility margin sign matches the exact interval") {
  // (0.3, 1.2) attains [0.9, 1.5]
  CHECK(su2_feasibility_margin({0.3, 1.2, 1.0}, 50000, 3) > 0.05);
  CHECK(su2_feasibility_margin({0.3, 1.2, 2.8}, 50000, 3) < -0.05);
  CHECK(su2_feasible_oracle({0.3, 1.2, 1.0}, 50000, 3));
  CHECK(!su2_feasible_oracle({0.3, 1.2, 2.8}, 50000, 3));
  // slack compensates for Monte-Carlo hull shrinkage: it widens acceptance
  CHECK(!su2_feasible_oracle({0.3, 1.2, 1.6}, 50000, 3));
  CHECK(su2_feasible_oracle({0.3, 1.2, 1.6}, 50000, 3, 0.2));
}

TEST_CASE("find_representation solves feasible SU(2) triples") {
  const auto specs = su2_specs({0.3, 1.2, 1.0});
  FinderConfig cfg;
  cfg.seed = 5;
  const FinderResult r = find_representation(2, Group::SU, 0, specs, cfg);
  REQUIRE(r.found);
  CHECK(fnorm(momentum(r.x) - Mat::Identity(2, 2)) < 1e-5);
  for (int j = 0; j < 3; ++j)
    CHECK(spec_distance(r.x.cs[j], specs[j]) < 1e-8);
}

TEST_CASE("find_representation reports failure on infeasible classes") {
  const auto specs = su2_specs({0.2, 0.3, 2.8});
  FinderConfig cfg;
  cfg.seed = 5;
  cfg.restarts = 6;
  cfg.max_iters = 1500;
  const FinderResult r = find_representation(2, Group::SU, 0, specs, cfg);
  CHECK(!r.found);
  CHECK(r.objective > 1e-6);
}

TEST_CASE("find_beta_fixed_representation lands on Fix(beta) in the classes") {
  const auto specs = su2_specs({0.3, 1.2, 1.0});
  FinderConfig cfg;
  cfg.seed = 9;
  const FinderResult r = find_beta_fixed_representation(2, Group::SU, 0, specs, cfg);
  REQUIRE(r.found);
  CHECK(fnorm(momentum(r.x) - Mat::Identity(2, 2)) < 1e-7);
  for (int j = 0; j < 3; ++j)
    CHECK(spec_distance(r.x.cs[j], specs[j]) < 1e-7);
  // beta fixes the point
  const SurfaceTuple bx = beta_numeric(r.x);
  for (int j = 0; j < 3; ++j) CHECK(fnorm(bx.cs[j] - r.x.cs[j]) < 1e-7);
  // suffix products are symmetric
  Mat suffix = Mat::Identity(2, 2);
  for (int j = 2; j >= 0; --j) {
    suffix = (r.x.cs[j] * suffix).eval();
  }
  CHECK(sym_defect(suffix) < 1e-7);

  const auto bad = su2_specs({0.2, 0.3, 2.8});
  FinderConfig cfg2;
  cfg2.seed = 9;
  cfg2.restarts = 6;
  cfg2.max_iters = 1500;
  CHECK(!find_beta_fixed_representation(2, Group::SU, 0, bad, cfg2).found);
}

TEST_CASE("torus-compatible classes are seeded exactly") {
  // U(2), l = 2, phases that cancel exactly slot-by-slot admit a diagonal
  // solution; the finder must return it with near-zero objective immediately
  RVec p1(2), p2(2);
  p1 << 1.9, 0.7;
  p2 << 2 * M_PI - 0.7, 2 * M_PI - 1.9;
  const std::vector<ClassSpec> specs = {ClassSpec(2, Group::U, p1),
                                        ClassSpec(2, Group::U, p2)};
  FinderConfig cfg;
  cfg.seed = 2;
  const FinderResult r = find_representation(2, Group::U, 0, specs, cfg);
  REQUIRE(r.found);
  CHECK(r.objective < 1e-20);
  CHECK(fnorm(momentum(r.x) - Mat::Identity(2, 2)) < 1e-12);

  const FinderResult rb = find_beta_fixed_representation(2, Group::U, 0, specs, cfg);
  REQUIRE(rb.found);
  CHECK(rb.objective < 1e-20);
}

TEST_CASE("find_representation handles l = 0 and g >= 1 exactly") {
  FinderConfig cfg;
  cfg.seed = 3;
  const FinderResult r = find_representation(3, Group::U, 2, {}, cfg);
  REQUIRE(r.found);
  CHECK(fnorm(momentum(r.x) - Mat::Identity(3, 3)) < 1e-10);
}

TEST_CASE("finder results are deterministic for a fixed config") {
  const auto specs = su2_specs({0.9, 1.4, 2.0});
  FinderConfig cfg;
  cfg.seed = 17;
  const FinderResult r1 = find_representation(2, Group::SU, 0, specs, cfg);
  const FinderResult r2 = find_representation(2, Group::SU, 0, specs, cfg);
  REQUIRE(r1.found == r2.found);
  CHECK(r1.objective == r2.objective);
  CHECK(r1.iters == r2.iters);
  for (int j = 0; j < 3; ++j) CHECK(fnorm(r1.x.cs[j] - r2.x.cs[j]) == 0.0);
}

TEST_CASE("isotropy_report separates diagonal from generic tuples") {
  Rng rng(601);
  // generic irreducible tuple: isotropy = center
  const SurfaceTuple x = random_tuple(3, Group::U, 1, 1, rng);
  const IsotropyReport rep = isotropy_report(x);
  CHECK(rep.dim == 1);
  CHECK(rep.irreducible);

  const SurfaceTuple xs = random_tuple(3, Group::SU, 1, 1, rng);
  const IsotropyReport reps = isotropy_report(xs);
  CHECK(reps.dim == 0);
  CHECK(reps.irreducible);

  // diagonal tuple: isotropy contains the full torus
  SurfaceTuple d = random_tuple(2, Group::U, 0, 2, rng);
  for (int j = 0; j < 2; ++j) {
    const Mat c = d.cs[j];
    Mat diag = Mat::Zero(2, 2);
    const UnitaryEig e = eig_unitary(c);
    diag(0, 0) = e.d(0);
    diag(1, 1) = e.d(1);
    d.cs[j] = diag;
    d.specs[j] = ClassSpec::of(diag, Group::U);
  }
  const IsotropyReport repd = isotropy_report(d);
  CHECK(repd.dim == 2);
  CHECK(!repd.irreducible);
}

TEST_CASE("gradient checks: analytic derivatives match finite differences") {
  const auto specs = su2_specs({0.8, 1.1, 1.9});
  const GradCheckReport mu = gradient_check_mu(2, Group::SU, 1, specs, 5, 1e-5, 21);
  CHECK(mu.points == 5);
  CHECK(mu.max_rel_err < 1e-6);
  const GradCheckReport bf =
      gradient_check_beta_fixed(2, Group::SU, 1, specs, 5, 1e-5, 21);
  CHECK(bf.points == 5);
  CHECK(bf.max_rel_err < 1e-6);

  RVec p1(3);
  p1 << 2.0, 1.0, 0.4;
  const std::vector<ClassSpec> uspecs = {ClassSpec(3, Group::U, p1)};
  const GradCheckReport mu3 = gradient_check_mu(3, Group::U, 1, uspecs, 3, 1e-5, 22);
  CHECK(mu3.max_rel_err < 1e-6);
  const GradCheckReport bf3 =
      gradient_check_beta_fixed(3, Group::U, 1, uspecs, 3, 1e-5, 23);
  CHECK(bf3.max_rel_err < 1e-6);
}
