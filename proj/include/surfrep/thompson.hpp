#pragma once

#include <optional>
#include <vector>

#include "surfrep/moduli.hpp"

namespace surfrep {

// Multiplicative factorization problem on U(n): find A_1..A_l with
// prescribed Spec(A_j^T A_j) = exp(i lambda_j) and A_1...A_l = 1.
struct ThompsonInstance {
  int n = 0;
  Group group = Group::U;
  std::vector<RVec> lambdas;  // l rows of n eigenphases each

  std::vector<ClassSpec> specs(const Tolerances& tol = {}) const;
};

// A tuple (w_1..w_l) of class elements with product 1 is involution-fixed
// when every suffix product w_j ... w_l is symmetric.

// From factors with A_1...A_l = 1 to an involution-fixed class tuple:
// u_j = (A_{j+1}...A_l)^T (A_j^T A_j) ((A_{j+1}...A_l)^T)^{-1}. Each u_j is
// conjugate to A_j^T A_j and the product telescopes to
// (A_1...A_l)^T (A_1...A_l) = 1.
std::vector<Mat> thompson_forward(const std::vector<Mat>& As,
                                  const Tolerances& tol = {});

// Inverse construction: peel symmetric square roots off the suffix chain.
// A_l^T A_l = w_l, then m_j = ((A_{j+1}...A_l)^T)^{-1} w_j (A_{j+1}...A_l)^T
// is symmetric precisely because the suffix products of the input are, and
// A_j is its square root; A_1 closes the product exactly. Throws
// PreconditionError when the input tuple is not involution-fixed on the
// momentum fiber.
std::vector<Mat> thompson_backward(const std::vector<Mat>& ws,
                                   const Tolerances& tol = {});

struct ThompsonCertificates {
  double spec_residual = 0;     // max_j spectrum distance of A_j^T A_j
  double product_residual = 0;  // ||A_1...A_l - 1||
};

struct ThompsonSolution {
  std::vector<Mat> As;
  std::vector<Mat> ws;  // the involution-fixed tuple behind the factors
  ThompsonCertificates cert;
};

// Constructive solver: search Fix(beta) on the pure class signature for the
// lambda classes, then run the backward substitution. nullopt when the
// search cannot reach the classes (infeasible data).
std::optional<ThompsonSolution> solve_thompson(const ThompsonInstance& inst,
                                               const FinderConfig& cfg = {},
                                               const Tolerances& tol = {});

}  // namespace surfrep
