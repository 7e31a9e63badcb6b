#pragma once

#include "surfrep/types.hpp"

namespace surfrep {

// Matrix dual number: value and directional derivative along one parameter
// direction. Products, inverses, transpose and conjugation push derivatives
// exactly, which gives analytic differentials for word maps (beta, momentum)
// and finder objectives.
struct Jet {
  Mat v, d;

  static Jet constant(const Mat& m) {
    return {m, Mat::Zero(m.rows(), m.cols())};
  }
  static Jet var(Mat value, Mat dot) { return {std::move(value), std::move(dot)}; }
};

inline Jet operator*(const Jet& x, const Jet& y) {
  return {x.v * y.v, x.d * y.v + x.v * y.d};
}

// Group inverse. On unitary curves this agrees with the adjoint.
inline Jet inv_u(const Jet& x) {
  Mat vi = x.v.inverse();
  return {vi, -vi * x.d * vi};
}
inline Mat inv_u(const Mat& m) { return m.adjoint(); }

inline Jet trans(const Jet& x) { return {x.v.transpose(), x.d.transpose()}; }
inline Mat trans(const Mat& m) { return m.transpose(); }

inline Jet conj_(const Jet& x) { return {x.v.conjugate(), x.d.conjugate()}; }
inline Mat conj_(const Mat& m) { return m.conjugate(); }

template <class M>
M commutator_of(const M& x, const M& y) {
  return x * y * inv_u(x) * inv_u(y);
}

}  // namespace surfrep
