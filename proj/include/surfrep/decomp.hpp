#pragma once

#include <optional>
#include <string>

#include "surfrep/qham.hpp"

namespace surfrep {

// Decomposition witness: symmetric chain elements v_1..v_g, w_1..w_l and the
// intertwiner phi with beta(x) = phi . x. For a tuple on mu^{-1}(1), phi is
// the inverse of the first chain element.
struct Witness {
  std::vector<Mat> vs, ws;
  Mat phi;
};

struct WitnessReport {
  bool ok = false;
  double res_symmetry = 0;   // condition (i): max symmetry defect
  double res_chain = 0;      // condition (ii): commutator/class chain
  double res_pairing = 0;    // condition (iii): tau(a_i) conjugate to b_i
  double res_characterization = 0;  // ||beta(x) - phi.x|| over slots
  std::string detail;
};

// Verifies the witness conditions at tolerance `tol` (residual threshold).
// Requires mu(x) = 1; throws PreconditionError otherwise.
WitnessReport check_witness(const SurfaceTuple& x, const Witness& w,
                            double tol, const Tolerances& tols = {});

// Chain construction: v_i and w_j are the suffix products of the relator
// times phi^{-1}.
Witness witness_from_phi(const SurfaceTuple& x, const Mat& phi);

// Equivariance: u . (vs, ws, phi) = (u v u^T, u w u^T, bar(u) phi u^{-1}).
Witness transform_witness(const Witness& w, const Mat& u);

// Solves beta(x) = phi . x for phi in Fix(tau_minus). Generic path: anchor
// slot with distinct eigenvalues pins phi to an eigenbasis torus coset;
// the torus coordinates come from a homogeneous least squares over the
// remaining slot equations. Non-generic inputs fall back to a Riemannian
// least-squares polish and are flagged.
struct PhiResult {
  Mat phi;
  double residual = 0;
  bool generic = true;
};
std::optional<PhiResult> solve_phi(const SurfaceTuple& x,
                                   const Tolerances& tol = {});

struct DecompSample {
  SurfaceTuple x;
  Witness wit;
};

// Exact decomposable sample: symmetric chains close the relator by
// construction; pair slots use b_i = v_{i+1} tau(a_i) v_{i+1}^{-1}, which
// propagates chain symmetry. Requires l >= 1; for l = 0 the sample is a
// conjugated diagonal-torus tuple (the chain construction has no free slot
// to absorb the cyclic closure).
DecompSample sample_decomposable(int n, Group group, int g, int l, Rng& rng);

}  // namespace surfrep
