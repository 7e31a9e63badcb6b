#pragma once

#include <vector>

#include "surfrep/jet.hpp"
#include "surfrep/lie.hpp"
#include "surfrep/rng.hpp"
#include "surfrep/types.hpp"

namespace surfrep {

// Point of (U x U)^g x C_1 x ... x C_l: g handle pairs and l class slots.
struct SurfaceTuple {
  int n = 0;
  Group group = Group::U;
  int g = 0, l = 0;
  std::vector<Mat> as, bs, cs;
  std::vector<ClassSpec> specs;  // size l

  int slot_count() const { return 2 * g + l; }
  void validate(const Tolerances& tol = {}) const;
  static SurfaceTuple checked(int n, Group group, std::vector<Mat> as,
                              std::vector<Mat> bs, std::vector<Mat> cs,
                              std::vector<ClassSpec> specs,
                              const Tolerances& tol = {});
};

// Tangent vector at a SurfaceTuple. Pair slots are left-trivialized (velocity
// at a is a * xa with xa skew-Hermitian); class slots carry a generator X
// (velocity at c is Xc - cX).
struct Tangent {
  std::vector<Mat> xa, xb, xc;
  static Tangent zero(const SurfaceTuple& x);
};

// mu(x) = [a_1,b_1]...[a_g,b_g] c_1...c_l.
Mat momentum(const SurfaceTuple& x);

// Diagonal conjugation action.
SurfaceTuple act(const Mat& u, const SurfaceTuple& x);

// The involution on tuples (numeric). Class slots stay in their classes.
SurfaceTuple beta_numeric(const SurfaceTuple& x);

SurfaceTuple random_tuple(int n, Group g_, int g, int l, Rng& rng);
SurfaceTuple random_tuple_on_relation(int n, Group g_, int g, int l, Rng& rng);
SurfaceTuple random_tuple_in_classes(Group g_, int g,
                                     const std::vector<ClassSpec>& specs,
                                     Rng& rng);
Tangent random_tangent(const SurfaceTuple& x, Rng& rng, double scale = 1.0);

// 2-form of the internally fused double at (a,b) on raw velocities
// (v_i, w_i) in T_a U x T_b U.
double omega_double(const Mat& a, const Mat& b, const Mat& v1, const Mat& w1,
                    const Mat& v2, const Mat& w2);

// 2-form of a conjugacy class at c on generators X, Y:
//   1/2 ( (Ad_c X | Y) - (X | Ad_c Y) ).
double omega_class(const Mat& c, const Mat& x, const Mat& y);

// Right-associated fusion of the g doubles and l classes:
// omega = sum of factor forms + 1/2 sum_k (mu_k^* thetaL ^ tail_k^* thetaR).
double omega_fused(const SurfaceTuple& x, const Tangent& t1, const Tangent& t2);

// Momentum differential: velocity of mu at mu(x) along t.
Mat dmomentum(const SurfaceTuple& x, const Tangent& t);

// Least-squares generator for a velocity V in T_c C (eigenbasis division,
// zero on centralizer directions).
Mat class_generator_from_velocity(const Mat& c, const Mat& vel);

enum class DiffMode { FiniteDifference, Analytic };

// Differential of beta at x along t, expressed as a Tangent at beta(x).
Tangent dbeta(const SurfaceTuple& x, const Tangent& t, DiffMode mode,
              double h = 1e-5);

// |omega_{beta(x)}(dbeta t1, dbeta t2) + omega_x(t1, t2)|  (beta^* omega = -omega).
double beta_pullback_residual(const SurfaceTuple& x, const Tangent& t1,
                              const Tangent& t2, DiffMode mode,
                              double h = 1e-5);

// Basis of T_x M as Tangent structs (class slots: eigenbasis off-diagonal
// generators, skipping centralizer directions).
std::vector<Tangent> tangent_basis(const SurfaceTuple& x);

// Fundamental vector field of X at x, as a Tangent.
Tangent fundamental_vector_field(const SurfaceTuple& x, const Mat& X);

// Axiom (ii): ker omega_x = { X# : (Ad mu(x) + Id) X = 0 }. predicted is the
// rank of the fundamental fields of that space, computed the nullity of the
// Gram matrix of omega on a tangent basis.
struct KernelCheckResult {
  int predicted = 0;
  int computed = 0;
  double gap = 0.0;  // singular-value ratio at the rank cutoff
  bool pass = false;
};
KernelCheckResult check_axiom_kernel(const SurfaceTuple& x,
                                     const Tolerances& tol = {});

// Axiom (iii): max residual of iota_{X#} omega = 1/2 mu^*(thetaL + thetaR | X)
// over an algebra basis for X and a tangent basis.
double check_axiom_contraction(const SurfaceTuple& x);

}  // namespace surfrep
