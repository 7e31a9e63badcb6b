#pragma once

#include <utility>
#include <vector>

#include "surfrep/rng.hpp"
#include "surfrep/types.hpp"

namespace surfrep {

// The involution on U(n): entrywise complex conjugation. An automorphism
// fixing the diagonal torus elementwise is tau_minus(u) = tau(u^{-1}), which
// for unitary u is the transpose.
Mat tau(const Mat& m);
Mat tau_minus(const Mat& u, const Tolerances& tol = {});

// Ad-invariant scalar product on skew-Hermitian matrices: (X|Y) = -Re tr(XY).
double ip(const Mat& x, const Mat& y);

// Eigendecomposition of a unitary matrix via its Schur form (diagonal for
// normal input): u = V diag(d) V*, with unit-modulus d and phases in [0,2pi).
struct UnitaryEig {
  Mat V;
  CVec d;
  RVec phases;
};
UnitaryEig eig_unitary(const Mat& u);

// Wrap to [0, 2pi).
double wrap_2pi(double x);
// Signed circular difference a - b wrapped to (-pi, pi].
double circ_diff(double a, double b);

// Squared spectrum distance between sorted-descending phase multisets under
// the best cyclic alignment; *shift receives the winning alignment.
double phase_dist2(const RVec& sorted_desc, const RVec& target_desc,
                   int* shift = nullptr);
// Spectrum distance (not squared) between a unitary and a class.
double spec_distance(const Mat& u, const ClassSpec& spec);

// Nearest class element: keep the eigenbasis, replace eigenphases by the
// spec's phases matched in circular order. degenerate flags a near-repeated
// input spectrum (eigenbasis not well determined inside clusters).
struct ProjectResult {
  Mat u;
  bool degenerate = false;
};
ProjectResult project_to_class(const Mat& u, const ClassSpec& spec);

// Takagi-type square root of a symmetric unitary w: factor w = O e^{iL} O^T
// with O real orthogonal (Re w and Im w are commuting real symmetrics), and
// return A = O e^{iL/2} O^T. A is symmetric and A^T A = A^2 = w. Half-angle
// branch: L in [0, 2pi), so L/2 in [0, pi).
Mat takagi_sqrt(const Mat& w, const Tolerances& tol = {});

// Factor form, for callers that need O and the phases.
struct TakagiFactor {
  RMat O;
  RVec lambda;  // in [0, 2pi)
};
TakagiFactor takagi_factor(const Mat& w, const Tolerances& tol = {});

// Haar sample via QR of a complex Ginibre matrix with the R-diagonal phase
// normalization; SU tag divides out an n-th root of the determinant.
Unitary haar_sample(int n, Group g, Rng& rng);

// Haar-distributed real orthogonal matrix (QR with sign normalization).
RMat haar_orthogonal(int n, Rng& rng);

// Random element of Fix(tau_minus) in a given class: O diag(e^{i phase}) O^T.
Mat symmetric_class_sample(const ClassSpec& spec, Rng& rng);

// Random symmetric unitary exp(iS), S real symmetric with entries scaled by
// `scale` (traceless for SU).
Mat symmetric_unitary_sample(int n, Group g, Rng& rng, double scale = 1.0);

// Random skew-Hermitian with Gaussian entries (traceless for SU).
Mat skew_sample(int n, Group g, Rng& rng, double scale = 1.0);

AlcovePoint alcove_project(const Mat& u, Group g, const Tolerances& tol = {});

// exp of a skew-Hermitian matrix (eigendecomposition of the Hermitian -iX).
Mat expm_skew(const Mat& x);
// exp(iS) for real symmetric S.
Mat expi_realsym(const RMat& s);
// Value and directional derivative of S -> exp(iS) at S along dS
// (Daleckii-Krein divided differences in the eigenbasis of S).
std::pair<Mat, Mat> dexpi_realsym(const RMat& s, const RMat& ds);

// Real basis of the Lie algebra u(n) (n^2 elements) or su(n) (n^2 - 1).
std::vector<Mat> algebra_basis(int n, Group g);

}  // namespace surfrep
