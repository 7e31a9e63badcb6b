#include "surfrep/lie.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace surfrep {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

void validate_unitary(const Mat& u, Group g, const Tolerances& tol,
                      const char* what) {
  if (u.rows() != u.cols() || u.rows() < 1)
    throw ValidationError(std::string(what) + ": not square");
  const double d = unitary_defect(u);
  if (!(d <= tol.unitary))
    throw ValidationError(std::string(what) + ": unitarity defect " +
                          std::to_string(d));
  if (g == Group::SU) {
    const double dd = std::abs(u.determinant() - Cplx(1.0, 0.0));
    if (!(dd <= tol.special))
      throw ValidationError(std::string(what) + ": det defect " +
                            std::to_string(dd));
  }
}

void validate_skew(const Mat& x, Group g, const Tolerances& tol,
                   const char* what) {
  if (x.rows() != x.cols() || x.rows() < 1)
    throw ValidationError(std::string(what) + ": not square");
  const double d = skew_defect(x);
  const double scale = std::max(1.0, x.norm());
  if (!(d <= tol.skew * scale))
    throw ValidationError(std::string(what) + ": skew defect " +
                          std::to_string(d));
  if (g == Group::SU) {
    const double tr = std::abs(x.trace());
    if (!(tr <= tol.skew * scale))
      throw ValidationError(std::string(what) + ": trace defect " +
                            std::to_string(tr));
  }
}

Mat tau(const Mat& m) { return m.conjugate(); }

Mat tau_minus(const Mat& u, const Tolerances& tol) {
  // Only for unitary input does the transpose equal tau(u^{-1}).
  validate_unitary(u, Group::U, tol, "tau_minus");
  return u.transpose();
}

double ip(const Mat& x, const Mat& y) { return -(x * y).trace().real(); }

double wrap_2pi(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double circ_diff(double a, double b) {
  double d = std::fmod(a - b, kTwoPi);
  if (d > kTwoPi / 2) d -= kTwoPi;
  if (d <= -kTwoPi / 2) d += kTwoPi;
  return d;
}

UnitaryEig eig_unitary(const Mat& u) {
  UnitaryEig e;
  const int n = static_cast<int>(u.rows());
  if (n == 1) {
    e.V = Mat::Identity(1, 1);
    e.d = CVec(1);
    e.d(0) = u(0, 0) / std::abs(u(0, 0));
  } else {
    Eigen::ComplexSchur<Mat> sch(u);
    e.V = sch.matrixU();
    e.d = sch.matrixT().diagonal();
    for (int k = 0; k < n; ++k) e.d(k) /= std::abs(e.d(k));
  }
  e.phases = RVec(n);
  for (int k = 0; k < n; ++k) e.phases(k) = wrap_2pi(std::arg(e.d(k)));
  return e;
}

ClassSpec::ClassSpec(int n_, Group g_, RVec raw_phases, const Tolerances& tol)
    : n(n_), group(g_) {
  if (raw_phases.size() != n_ || n_ < 1)
    throw ValidationError("ClassSpec: phase count mismatch");
  double raw_sum = raw_phases.sum();
  phases = raw_phases;
  for (int k = 0; k < n; ++k) phases(k) = wrap_2pi(phases(k));
  std::sort(phases.data(), phases.data() + n, std::greater<double>());
  if (group == Group::SU) {
    const double frac = std::abs(raw_sum / kTwoPi -
                                 std::round(raw_sum / kTwoPi));
    if (!(frac * kTwoPi <= std::max(tol.special, 1e-8) * n))
      throw ValidationError("ClassSpec: SU phases do not sum to 0 mod 2pi");
  }
}

ClassSpec ClassSpec::of(const Mat& u, Group g, const Tolerances& tol) {
  const UnitaryEig e = eig_unitary(u);
  return ClassSpec(static_cast<int>(u.rows()), g, e.phases, tol);
}

Mat ClassSpec::diag() const {
  Mat d = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) d(k, k) = std::polar(1.0, phases(k));
  return d;
}

bool ClassSpec::has_degenerate_phases(double gap) const {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(circ_diff(phases(i), phases(j))) < gap) return true;
  return false;
}

double phase_dist2(const RVec& sorted_desc, const RVec& target_desc,
                   int* shift) {
  const int n = static_cast<int>(sorted_desc.size());
  double best = -1.0;
  int best_s = 0;
  for (int s = 0; s < n; ++s) {
    double cost = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d = circ_diff(sorted_desc(k), target_desc((k + s) % n));
      cost += d * d;
    }
    if (best < 0 || cost < best - 1e-15) {
      best = cost;
      best_s = s;
    }
  }
  if (shift) *shift = best_s;
  return best;
}

double spec_distance(const Mat& u, const ClassSpec& spec) {
  const UnitaryEig e = eig_unitary(u);
  RVec ph = e.phases;
  std::sort(ph.data(), ph.data() + ph.size(), std::greater<double>());
  return std::sqrt(phase_dist2(ph, spec.phases));
}

ProjectResult project_to_class(const Mat& u, const ClassSpec& spec) {
  const int n = static_cast<int>(u.rows());
  if (n != spec.n) throw ValidationError("project_to_class: size mismatch");
  const UnitaryEig e = eig_unitary(u);
  // Sort eigenpairs by descending phase; stable on ties.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return e.phases(a) > e.phases(b);
  });
  RVec sorted(n);
  for (int k = 0; k < n; ++k) sorted(k) = e.phases(idx[k]);
  int shift = 0;
  phase_dist2(sorted, spec.phases, &shift);

  ProjectResult out;
  Mat d = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k)
    d(idx[k], idx[k]) = std::polar(1.0, spec.phases((k + shift) % n));
  out.u = e.V * d * e.V.adjoint();
  out.degenerate = false;
  for (int i = 0; i < n && !out.degenerate; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(circ_diff(e.phases(i), e.phases(j))) < 1e-7) {
        out.degenerate = true;
        break;
      }
  return out;
}

namespace {

// Simultaneous diagonalization of commuting real symmetric matrices: columns
// of the result diagonalize a, then b within each eigenvalue cluster of a.
RMat simdiag_commuting(const RMat& a, const RMat& b) {
  const int n = static_cast<int>(a.rows());
  Eigen::SelfAdjointEigenSolver<RMat> es(a);
  RMat q = es.eigenvectors();
  const RVec ev = es.eigenvalues();
  const double ctol = 1e-7 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  int i = 0;
  while (i < n) {
    int j = i + 1;
    while (j < n && ev(j) - ev(i) <= ctol) ++j;
    if (j - i > 1) {
      const RMat qc = q.middleCols(i, j - i);
      RMat m = qc.transpose() * b * qc;
      m = 0.5 * (m + m.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<RMat> es2(m);
      q.middleCols(i, j - i) = qc * es2.eigenvectors();
    }
    i = j;
  }
  return q;
}

}  // namespace

TakagiFactor takagi_factor(const Mat& w, const Tolerances& tol) {
  validate_unitary(w, Group::U, tol, "takagi_sqrt");
  if (!is_symmetric(w, std::max(tol.symmetry, 1e-9)))
    throw PreconditionError("takagi_sqrt: input not symmetric, defect " +
                            std::to_string(sym_defect(w)));
  const int n = static_cast<int>(w.rows());
  const RMat re = w.real();
  const RMat im = w.imag();
  const RMat a = 0.5 * (re + re.transpose());
  const RMat b = 0.5 * (im + im.transpose());
  TakagiFactor f;
  f.O = simdiag_commuting(a, b);
  f.lambda = RVec(n);
  const RMat da = f.O.transpose() * a * f.O;
  const RMat db = f.O.transpose() * b * f.O;
  for (int k = 0; k < n; ++k)
    f.lambda(k) = wrap_2pi(std::atan2(db(k, k), da(k, k)));
  // Reconstruction check.
  Mat rec = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const Cplx ph = std::polar(1.0, f.lambda(k));
    rec += ph * (f.O.col(k) * f.O.col(k).transpose()).cast<Cplx>();
  }
  const double res = (rec - w).norm();
  if (!(res <= tol.factorization * std::max(1.0, w.norm())))
    throw FactorizationError("takagi_sqrt: reconstruction residual " +
                             std::to_string(res));
  return f;
}

Mat takagi_sqrt(const Mat& w, const Tolerances& tol) {
  const TakagiFactor f = takagi_factor(w, tol);
  const int n = static_cast<int>(w.rows());
  Mat a = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const Cplx ph = std::polar(1.0, 0.5 * f.lambda(k));
    a += ph * (f.O.col(k) * f.O.col(k).transpose()).cast<Cplx>();
  }
  return a;
}

Unitary haar_sample(int n, Group g, Rng& rng) {
  Mat z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = Cplx(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  CVec lam(n);
  for (int k = 0; k < n; ++k) {
    const Cplx rkk = r(k, k);
    lam(k) = std::abs(rkk) > 0 ? rkk / std::abs(rkk) : Cplx(1, 0);
  }
  q = q * lam.asDiagonal();
  if (g == Group::SU) {
    const double argdet = std::arg(q.determinant());
    q *= std::polar(1.0, -argdet / n);
  }
  return Unitary::trusted(std::move(q), g);
}

RMat haar_orthogonal(int n, Rng& rng) {
  RMat z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = rng.gaussian();
  Eigen::HouseholderQR<RMat> qr(z);
  RMat q = qr.householderQ();
  const RMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k)
    if (r(k, k) < 0) q.col(k) = -q.col(k);
  return q;
}

Mat symmetric_class_sample(const ClassSpec& spec, Rng& rng) {
  const RMat o = haar_orthogonal(spec.n, rng);
  return o.cast<Cplx>() * spec.diag() * o.transpose().cast<Cplx>();
}

Mat symmetric_unitary_sample(int n, Group g, Rng& rng, double scale) {
  RMat s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) s(i, j) = s(j, i) = scale * rng.gaussian();
  if (g == Group::SU) {
    const double t = s.trace() / n;
    for (int i = 0; i < n; ++i) s(i, i) -= t;
  }
  return expi_realsym(s);
}

Mat skew_sample(int n, Group g, Rng& rng, double scale) {
  Mat x(n, n);
  for (int i = 0; i < n; ++i) {
    x(i, i) = Cplx(0.0, scale * rng.gaussian());
    for (int j = i + 1; j < n; ++j) {
      const Cplx z(scale * rng.gaussian(), scale * rng.gaussian());
      x(i, j) = z;
      x(j, i) = -std::conj(z);
    }
  }
  if (g == Group::SU) {
    const Cplx t = x.trace() / double(n);
    for (int i = 0; i < n; ++i) x(i, i) -= t;
  }
  return x;
}

AlcovePoint alcove_project(const Mat& u, Group g, const Tolerances& tol) {
  validate_unitary(u, g, tol, "alcove_project");
  const int n = static_cast<int>(u.rows());
  const UnitaryEig e = eig_unitary(u);
  RVec ph = e.phases;
  std::sort(ph.data(), ph.data() + n, std::greater<double>());
  AlcovePoint p;
  p.n = n;
  p.group = g;
  if (g == Group::U) {
    p.theta = ph;
    return p;
  }
  // SU(n): phases sum to 2pi k; subtract 2pi from the k largest. The cyclic
  // reordering (ph_{k+1},...,ph_n, ph_1 - 2pi,...,ph_k - 2pi) is descending,
  // sums to zero, and has width <= 2pi.
  const double sum = ph.sum();
  const int k = static_cast<int>(std::llround(sum / kTwoPi));
  if (std::abs(sum - kTwoPi * k) > 1e-6 * n)
    throw ValidationError("alcove_project: SU phase sum not a 2pi multiple");
  RVec th(n);
  for (int i = 0; i < n - k; ++i) th(i) = ph(k + i);
  for (int i = 0; i < k; ++i) th(n - k + i) = ph(i) - kTwoPi;
  th.array() -= th.sum() / n;  // remove roundoff drift in the zero-sum lift
  p.theta = th;
  return p;
}

Mat expm_skew(const Mat& x) {
  const int n = static_cast<int>(x.rows());
  const Mat h = Cplx(0, -1) * x;  // Hermitian
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  CVec ph(n);
  for (int k = 0; k < n; ++k) ph(k) = std::polar(1.0, es.eigenvalues()(k));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Mat expi_realsym(const RMat& s) {
  const int n = static_cast<int>(s.rows());
  Eigen::SelfAdjointEigenSolver<RMat> es(s);
  CVec ph(n);
  for (int k = 0; k < n; ++k) ph(k) = std::polar(1.0, es.eigenvalues()(k));
  return es.eigenvectors().cast<Cplx>() * ph.asDiagonal() *
         es.eigenvectors().transpose().cast<Cplx>();
}

std::pair<Mat, Mat> dexpi_realsym(const RMat& s, const RMat& ds) {
  const int n = static_cast<int>(s.rows());
  Eigen::SelfAdjointEigenSolver<RMat> es(s);
  const RMat& q = es.eigenvectors();
  const RVec& th = es.eigenvalues();
  CVec ph(n);
  for (int k = 0; k < n; ++k) ph(k) = std::polar(1.0, th(k));
  const Mat qc = q.cast<Cplx>();
  const Mat val = qc * ph.asDiagonal() * qc.adjoint();
  // Divided differences of f(x) = e^{ix}.
  const RMat dsq = q.transpose() * ds * q;
  Mat core(n, n);
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r) {
      Cplx f;
      const double dx = th(p) - th(r);
      if (std::abs(dx) < 1e-9) {
        f = Cplx(0, 1) * std::polar(1.0, 0.5 * (th(p) + th(r)));
        // second-order correction is negligible at this gap
      } else {
        f = (ph(p) - ph(r)) / Cplx(dx, 0.0);
      }
      core(p, r) = f * dsq(p, r);
    }
  const Mat dval = qc * core * qc.adjoint();
  return {val, dval};
}

std::vector<Mat> algebra_basis(int n, Group g) {
  std::vector<Mat> basis;
  const Cplx i1(0, 1);
  if (g == Group::U) {
    for (int p = 0; p < n; ++p) {
      Mat e = Mat::Zero(n, n);
      e(p, p) = i1;
      basis.push_back(e);
    }
  } else {
    for (int p = 0; p + 1 < n; ++p) {
      Mat e = Mat::Zero(n, n);
      e(p, p) = i1;
      e(p + 1, p + 1) = -i1;
      basis.push_back(e);
    }
  }
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      Mat e = Mat::Zero(n, n);
      e(p, q) = 1;
      e(q, p) = -1;
      basis.push_back(e);
      Mat f = Mat::Zero(n, n);
      f(p, q) = i1;
      f(q, p) = i1;
      basis.push_back(f);
    }
  return basis;
}

}  // namespace surfrep
