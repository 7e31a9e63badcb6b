#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "surfrep/qham.hpp"

namespace surfrep {

struct FinderConfig {
  int max_iters = 4000;
  int restarts = 16;
  double step_init = 0.25;
  double tol_objective = 1e-18;  // stop when the objective falls below this
  double min_step = 1e-14;       // line-search floor
  uint64_t seed = 1;
};

struct FinderResult {
  bool found = false;
  SurfaceTuple x;      // best point seen (valid tuple even when !found)
  double objective = 0;
  int restarts_used = 0;
  int iters = 0;
};

// Searches mu^{-1}(1) with class slots pinned to the given classes exactly
// (c_j = k_j d_j k_j^{-1} over free conjugators k_j). Objective
// ||mu(x) - 1||_F^2, multi-restart projected gradient descent with
// backtracking. Degenerate-free exact constructions seed restart 0 where the
// signature admits one (l = 0, or g >= 1 with a determinant-compatible class
// product).
FinderResult find_representation(int n, Group group, int g,
                                 const std::vector<ClassSpec>& specs,
                                 const FinderConfig& cfg = {});

// Searches Fix(beta) for a tuple whose class slots hit the given classes.
// The parametrization is exact on Fix(beta): symmetric suffix chain
// N_j = exp(i S_j) with c_j = N_j N_{j+1}^{-1}, pair slots
// b_i = P_i tau(a_i) P_i^{-1}. For g = 0 the momentum is 1 by construction;
// g >= 1 adds a ||mu - 1||^2 penalty. Objective: squared spectrum distance
// of the c_j to their classes (plus the penalty).
FinderResult find_beta_fixed_representation(int n, Group group, int g,
                                            const std::vector<ClassSpec>& specs,
                                            const FinderConfig& cfg = {});

// Dimension of the isotropy algebra {X : [X, slot] = 0 for all slots} inside
// u(n) / su(n), by SVD nullity of the stacked commutator operator. gap is the
// singular-value ratio at the rank cutoff (0 when the nullity is 0 or full).
// Irreducible when the isotropy is exactly the center.
struct IsotropyReport {
  int dim = 0;
  double gap = 0;
  bool irreducible = false;
};
IsotropyReport isotropy_report(const SurfaceTuple& x,
                               const Tolerances& tol = {});

// Monte-Carlo image cloud of the SU(2) alcove angle of c_1 ... c_l, with
// c_j drawn uniformly in its class (full) or uniformly in the beta-fixed
// stratum (symmetric suffix chain). Batched over the kernels lane.
struct PolytopeCloud {
  std::vector<double> angles;
  double lo = 0, hi = 0;  // interval hull of the cloud
  std::string lane;
};
PolytopeCloud polytope_sample_su2(const std::vector<double>& class_angles,
                                  int samples, bool beta_fixed, uint64_t seed);

struct Interval {
  double lo = 0, hi = 0;
};

// Independent brute-force oracle: direct quaternion products of uniform
// class elements, no kernels involvement.
Interval su2_interval_oracle(const std::vector<double>& class_angles,
                             int draws, uint64_t seed);

// Exact attainable interval for the product angle, by iterated folding of
// [|x - t|, min(x + t, 2pi - x - t)] over the class angles.
Interval su2_interval_exact(const std::vector<double>& class_angles);

// Feasibility of c_1 ... c_l = 1: the last angle must fall in the attainable
// interval of the others. margin > 0 means strictly feasible, < 0 strictly
// infeasible (distance to the interval, Monte-Carlo estimate).
double su2_feasibility_margin(const std::vector<double>& class_angles,
                              int draws, uint64_t seed);
bool su2_feasible_oracle(const std::vector<double>& class_angles, int draws,
                         uint64_t seed, double slack = 0.0);

// Derivative validation for the finder objectives: max over random points of
// the relative error between the analytic gradient and a central finite
// difference along every coordinate.
struct GradCheckReport {
  double max_rel_err = 0;
  int points = 0;
};
GradCheckReport gradient_check_mu(int n, Group group, int g,
                                  const std::vector<ClassSpec>& specs,
                                  int points, double h, uint64_t seed);
GradCheckReport gradient_check_beta_fixed(int n, Group group, int g,
                                          const std::vector<ClassSpec>& specs,
                                          int points, double h, uint64_t seed);

}  // namespace surfrep
