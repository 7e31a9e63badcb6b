#pragma once

namespace surfrep {

// Central tolerance table. One instance is threaded through validation and
// checks; callers may override individual entries (CLI --tol maps onto the
// check-level ones). Values are absolute unless noted.
struct Tolerances {
  double unitary = 1e-10;          // ||u* u - I||_F at construction
  double skew = 1e-12;             // ||X + X*||_F at construction
  double special = 1e-10;          // |det u - 1| for the SU tag
  double class_membership = 1e-8;  // spectrum distance to a ClassSpec
  double algebra = 1e-12;          // exact algebraic identities
  double symmetry = 1e-9;          // ||w - w^T||_F symmetric-element checks
  double factorization = 1e-8;     // reconstruction residual postconditions
  double witness = 1e-9;           // decomposition witness residuals
  double phi_residual = 1e-8;      // acceptance threshold for solve_phi
  double momentum_one = 1e-8;      // ||mu(x) - I||_F preconditions
  double contraction = 1e-10;      // form axiom (iii) residual
  double rank_gap = 1e-8;          // relative singular-value cutoff for rank decisions
  double beta_form_fd = 1e-6;      // beta pullback residual, finite-difference mode
  double beta_form_analytic = 1e-10;  // beta pullback residual, analytic mode
};

}  // namespace surfrep
