#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include "surfrep/tolerances.hpp"

namespace surfrep {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

enum class Group { U, SU };

inline const char* group_name(Group g) { return g == Group::U ? "U" : "SU"; }

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FactorizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double fnorm(const Mat& m) { return m.norm(); }

inline double unitary_defect(const Mat& u) {
  return (u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).norm();
}

inline double skew_defect(const Mat& x) { return (x + x.adjoint()).norm(); }

// Defect from Fix(tau_minus): distance to w^T = w.
inline double sym_defect(const Mat& m) { return (m - m.transpose()).norm(); }

inline bool is_symmetric(const Mat& m, double tol = 1e-9) {
  return sym_defect(m) <= tol * std::max(1.0, m.norm());
}

void validate_unitary(const Mat& u, Group g, const Tolerances& tol,
                      const char* what);
void validate_skew(const Mat& x, Group g, const Tolerances& tol,
                   const char* what);

// n x n complex matrix, unitarity (and det for the SU tag) checked at
// construction. trusted() skips the check for values produced by operations
// that preserve the invariant.
class Unitary {
 public:
  Unitary(Mat m, Group g, const Tolerances& tol = {})
      : m_(std::move(m)), group_(g) {
    validate_unitary(m_, group_, tol, "Unitary");
  }
  static Unitary trusted(Mat m, Group g) { return Unitary(std::move(m), g, 0); }
  static Unitary identity(int n, Group g) {
    return trusted(Mat::Identity(n, n), g);
  }

  const Mat& m() const { return m_; }
  Group group() const { return group_; }
  int n() const { return static_cast<int>(m_.rows()); }

 private:
  Unitary(Mat m, Group g, int) : m_(std::move(m)), group_(g) {}
  Mat m_;
  Group group_;
};

// Skew-Hermitian matrix (tangent data), checked at construction.
class SkewHermitian {
 public:
  SkewHermitian(Mat x, Group g, const Tolerances& tol = {})
      : m_(std::move(x)), group_(g) {
    validate_skew(m_, group_, tol, "SkewHermitian");
  }
  static SkewHermitian trusted(Mat x, Group g) {
    return SkewHermitian(std::move(x), g, 0);
  }

  const Mat& m() const { return m_; }
  Group group() const { return group_; }
  int n() const { return static_cast<int>(m_.rows()); }

 private:
  SkewHermitian(Mat x, Group g, int) : m_(std::move(x)), group_(g) {}
  Mat m_;
  Group group_;
};

// Conjugacy class of U(n)/SU(n): eigenphases sorted descending in [0, 2pi).
// For the SU tag the phase sum must be an integer multiple of 2pi.
struct ClassSpec {
  int n = 0;
  Group group = Group::U;
  RVec phases;

  ClassSpec() = default;
  ClassSpec(int n_, Group g_, RVec raw_phases, const Tolerances& tol = {});
  static ClassSpec of(const Mat& u, Group g, const Tolerances& tol = {});

  Mat diag() const;
  bool has_degenerate_phases(double gap = 1e-7) const;
};

// Point of the fundamental alcove. For SU(n): real phase lifts, sorted
// descending, summing to zero, with theta_1 - theta_n <= 2pi. For U(n):
// phases in [0, 2pi) sorted descending.
struct AlcovePoint {
  int n = 0;
  Group group = Group::U;
  RVec theta;

  // SU(2): the whole point is the single angle theta in [0, pi].
  double angle() const { return theta(0); }
};

}  // namespace surfrep
