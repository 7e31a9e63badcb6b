#pragma once

#include <cstddef>

namespace surfrep::kern {

// Hot loops for the SU(2) class-product walks, in structure-of-arrays form.
// Both steps advance a batch of unit vectors: project the supplied Gaussian
// draws orthogonally to the current state, normalize, and combine
//   state <- cos_t * state + sin_t * direction.
// step4 walks on S^3 (full conjugation orbits), step3 on the symmetric
// equator S^2 (second Pauli coordinate pinned to zero).
struct Ops {
  void (*step4)(double* s0, double* s1, double* s2, double* s3,
                const double* g0, const double* g1, const double* g2,
                const double* g3, double cos_t, double sin_t, std::size_t n);
  void (*step3)(double* s0, double* s1, double* s2, const double* g0,
                const double* g1, const double* g2, double cos_t,
                double sin_t, std::size_t n);
  void (*minmax)(const double* x, std::size_t n, double* lo, double* hi);
  const char* name;
};

enum class Lane { Auto, Scalar, Avx2 };

const Ops& scalar_ops();
// Null when the build or the host CPU lacks AVX2.
const Ops* avx2_ops();

// Dispatched table. Auto prefers AVX2 when available.
const Ops& ops();
// Test/config override; throws PreconditionError for an unavailable lane.
void force_lane(Lane lane);
Lane forced_lane();
const char* lane_name();
bool avx2_available();

}  // namespace surfrep::kern
