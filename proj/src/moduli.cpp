#include "surfrep/moduli.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "surfrep/kernels.hpp"
#include "surfrep/lie.hpp"

namespace surfrep {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Inverse along a unitary curve: (u^{-1})' = (u')^dagger, exact given
// unitarity, and the value agrees with the plain-path adjoint.
Jet inv_unitary(const Jet& x) { return {x.v.adjoint(), x.d.adjoint()}; }

Jet comm_jet(const Jet& a, const Jet& b) {
  return a * b * inv_unitary(a) * inv_unitary(b);
}

// Real symmetric coordinate basis (traceless for SU).
std::vector<RMat> sym_basis(int n, Group g) {
  std::vector<RMat> basis;
  if (g == Group::U) {
    for (int p = 0; p < n; ++p) {
      RMat e = RMat::Zero(n, n);
      e(p, p) = 1;
      basis.push_back(e);
    }
  } else {
    for (int p = 0; p + 1 < n; ++p) {
      RMat e = RMat::Zero(n, n);
      e(p, p) = 1;
      e(p + 1, p + 1) = -1;
      basis.push_back(e);
    }
  }
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      RMat e = RMat::Zero(n, n);
      e(p, q) = e(q, p) = 1;
      basis.push_back(e);
    }
  return basis;
}

// Squared spectrum distance of a unitary jet to a class, with derivative.
// Eigenphase velocity for a simple eigenpair (lambda, v):
// theta' = Re(-i conj(lambda) v^* c' v).
std::pair<double, double> spec_dist2_jet(const Jet& c, const ClassSpec& spec) {
  const int n = spec.n;
  const UnitaryEig e = eig_unitary(c.v);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return e.phases(a) > e.phases(b); });
  RVec sorted(n);
  for (int k = 0; k < n; ++k) sorted(k) = e.phases(idx[k]);
  int shift = 0;
  const double val = phase_dist2(sorted, spec.phases, &shift);
  double dval = 0;
  for (int k = 0; k < n; ++k) {
    const int m = idx[k];
    const Cplx lam = e.d(m);
    const Cplx vcv = (e.V.col(m).adjoint() * c.d * e.V.col(m))(0, 0);
    const double thdot = (Cplx(0, -1) * std::conj(lam) * vcv).real();
    dval += 2.0 * circ_diff(sorted(k), spec.phases((k + shift) % n)) * thdot;
  }
  return {val, dval};
}

// Constructive [a, b] = m for a det-1 unitary m: in the eigenbasis, a cyclic
// shift alpha and a diagonal beta with beta_{k-1} = beta_k e^{i phi_k} give
// [alpha, beta] = diag(e^{i phi}). Scalar factors put a, b in SU(n) without
// changing the commutator.
std::pair<Mat, Mat> commutator_solution(const Mat& m, Group group) {
  const int n = static_cast<int>(m.rows());
  if (n == 1) return {Mat::Identity(1, 1), Mat::Identity(1, 1)};
  const UnitaryEig e = eig_unitary(m);
  Mat perm = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) perm((k + 1) % n, k) = 1;
  CVec beta(n);
  beta(n - 1) = 1;
  for (int k = n - 1; k >= 1; --k) beta(k - 1) = beta(k) * e.d(k);
  Mat a = e.V * perm * e.V.adjoint();
  Mat b = e.V * Mat(beta.asDiagonal()) * e.V.adjoint();
  if (group == Group::SU) {
    a *= std::polar(1.0, -std::arg(a.determinant()) / n);
    b *= std::polar(1.0, -std::arg(b.determinant()) / n);
  }
  return {a, b};
}

// Per-class phase assignments (columns are permutations of the class phases)
// whose rows sum to 0 mod 2pi; gives exact diagonal solutions when it exists.
std::optional<std::vector<RVec>> torus_phases(
    int n, const std::vector<ClassSpec>& specs) {
  const int l = static_cast<int>(specs.size());
  std::vector<RVec> cols(l);
  if (l == 0) return cols;
  cols[0] = specs[0].phases;
  double combos = 1;
  for (int j = 1; j < l; ++j) {
    combos *= std::tgamma(n + 1.0);
    if (combos > 50000) return std::nullopt;
  }
  std::function<bool(int)> rec = [&](int j) -> bool {
    if (j == l) {
      for (int k = 0; k < n; ++k) {
        double s = 0;
        for (int c = 0; c < l; ++c) s += cols[c](k);
        if (std::abs(circ_diff(s, 0.0)) > 1e-9) return false;
      }
      return true;
    }
    std::vector<int> perm(n);  // per level: inner levels restart their own scan
    std::iota(perm.begin(), perm.end(), 0);
    do {
      RVec col(n);
      for (int k = 0; k < n; ++k) col(k) = specs[j].phases(perm[k]);
      cols[j] = col;
      if (rec(j + 1)) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
  };
  if (!rec(1)) return std::nullopt;
  return cols;
}

CVec random_unit_phases(int n, Group group, Rng& rng) {
  CVec d(n);
  double sum = 0;
  for (int k = 0; k < n; ++k) {
    const double ph = kTwoPi * rng.uniform() - kTwoPi / 2;
    d(k) = std::polar(1.0, ph);
    sum += ph;
  }
  if (group == Group::SU)
    for (int k = 0; k < n; ++k) d(k) *= std::polar(1.0, -sum / n);
  return d;
}

// Generic backtracking descent. The problem exposes value(), gradient(),
// move() and is cheap to copy.
template <class P>
std::pair<double, int> descend(P& prob, const FinderConfig& cfg) {
  double f = prob.value();
  double step = cfg.step_init;
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    if (f <= cfg.tol_objective) break;
    const RVec grad = prob.gradient();
    const double g2 = grad.squaredNorm();
    if (g2 < 1e-30) break;
    bool accepted = false;
    for (double t = step; t >= cfg.min_step; t *= 0.5) {
      P cand = prob;
      cand.move(grad, -t);
      const double fc = cand.value();
      if (fc <= f - 1e-4 * t * g2) {
        prob = std::move(cand);
        f = fc;
        step = std::min(t * 2.5, 8.0);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return {f, it};
}

// Levenberg-Marquardt polish on the problem's residual vector, numeric
// Jacobian in the move() chart. Backtracking descent goes sublinear in the
// ill-conditioned valleys near the feasibility boundary; the normal-equation
// step does not. Only accepts improvements, so the objective is monotone.
template <class P>
std::pair<double, int> lm_polish(P& prob, int iters) {
  Eigen::VectorXd r = prob.residuals();
  double f = r.squaredNorm();
  const int dim = prob.dim();
  const double h = 1e-6;
  double lambda = 1e-4;
  int it = 0;
  for (; it < iters && f > 1e-28; ++it) {
    Eigen::MatrixXd J(r.size(), dim);
    for (int d = 0; d < dim; ++d) {
      RVec e = RVec::Zero(dim);
      e(d) = 1.0;
      P plus = prob;
      plus.move(e, h);
      P minus = prob;
      minus.move(e, -h);
      J.col(d) = (plus.residuals() - minus.residuals()) / (2 * h);
    }
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    if (g.norm() < 1e-16) break;
    bool accepted = false;
    for (int tries = 0; tries < 25; ++tries) {
      Eigen::MatrixXd A = JtJ;
      A.diagonal().array() += lambda;
      const RVec step = A.ldlt().solve(-g);
      P cand = prob;
      cand.move(step, 1.0);
      const Eigen::VectorXd rc = cand.residuals();
      const double fc = rc.squaredNorm();
      if (fc < f) {
        prob = std::move(cand);
        r = rc;
        f = fc;
        lambda = std::max(lambda * 0.3, 1e-14);
        accepted = true;
        break;
      }
      lambda *= 10;
      if (lambda > 1e14) break;
    }
    if (!accepted) break;
  }
  return {f, it};
}

// ---------------------------------------------------------------------------
// find_representation: free pair slots and class conjugators, objective
// ||mu - 1||^2.

struct MuProblem {
  int n = 0;
  Group group = Group::U;
  int g = 0, l = 0;
  const std::vector<ClassSpec>* specs = nullptr;
  const std::vector<Mat>* alg = nullptr;
  std::vector<Mat> dcls;

  std::vector<Mat> us;  // 2g
  std::vector<Mat> ks;  // l

  int blocks() const { return 2 * g + l; }
  int dim() const { return blocks() * static_cast<int>(alg->size()); }

  SurfaceTuple tuple() const {
    SurfaceTuple x;
    x.n = n;
    x.group = group;
    x.g = g;
    x.l = l;
    for (int i = 0; i < g; ++i) {
      x.as.push_back(us[2 * i]);
      x.bs.push_back(us[2 * i + 1]);
    }
    for (int j = 0; j < l; ++j)
      x.cs.push_back(ks[j] * dcls[j] * ks[j].adjoint());
    x.specs = *specs;
    return x;
  }

  std::vector<Mat> factors() const {
    std::vector<Mat> f;
    for (int i = 0; i < g; ++i) {
      const Mat& a = us[2 * i];
      const Mat& b = us[2 * i + 1];
      f.push_back(a * b * a.adjoint() * b.adjoint());
    }
    for (int j = 0; j < l; ++j) f.push_back(ks[j] * dcls[j] * ks[j].adjoint());
    return f;
  }

  double value() const {
    const std::vector<Mat> f = factors();
    Mat mu = Mat::Identity(n, n);
    for (const Mat& m : f) mu = mu * m;
    return (mu - Mat::Identity(n, n)).squaredNorm();
  }

  // Flattened mu - 1; squaredNorm equals value().
  Eigen::VectorXd residuals() const {
    const std::vector<Mat> f = factors();
    Mat mu = Mat::Identity(n, n);
    for (const Mat& m : f) mu = mu * m;
    const Mat d = mu - Mat::Identity(n, n);
    Eigen::VectorXd r(2 * n * n);
    int c = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        r(c++) = d(i, j).real();
        r(c++) = d(i, j).imag();
      }
    return r;
  }

  RVec gradient() const {
    const std::vector<Mat> f = factors();
    const int m = static_cast<int>(f.size());
    std::vector<Mat> pre(m + 1), suf(m + 1);
    pre[0] = Mat::Identity(n, n);
    for (int s = 0; s < m; ++s) pre[s + 1] = pre[s] * f[s];
    suf[m] = Mat::Identity(n, n);
    for (int s = m - 1; s >= 0; --s) suf[s] = f[s] * suf[s + 1];
    const Mat gmat = (pre[m] - Mat::Identity(n, n)).adjoint();
    // d||mu - 1||^2 along factor velocity Fdot in slot s:
    // 2 Re tr(M_s Fdot), M_s = suf_{s+1} gmat pre_s.
    std::vector<Mat> M(m);
    for (int s = 0; s < m; ++s) M[s] = suf[s + 1] * gmat * pre[s];

    const int A = static_cast<int>(alg->size());
    RVec grad(dim());
    for (int i = 0; i < g; ++i) {
      const Mat& a = us[2 * i];
      const Mat& b = us[2 * i + 1];
      const Mat adj_a = a.adjoint(), adj_b = b.adjoint();
      for (int r = 0; r < A; ++r) {
        const Mat& E = (*alg)[r];
        // a-direction: d[a,b] = a (E b - b E) a^ b^
        const Mat fa = a * (E * b - b * E) * adj_a * adj_b;
        grad((2 * i) * A + r) = 2.0 * (M[i] * fa).trace().real();
        // b-direction: d[a,b] = a b (E a^ - a^ E) b^
        const Mat fb = a * b * (E * adj_a - adj_a * E) * adj_b;
        grad((2 * i + 1) * A + r) = 2.0 * (M[i] * fb).trace().real();
      }
    }
    for (int j = 0; j < l; ++j) {
      const Mat& k = ks[j];
      const Mat adj_k = k.adjoint();
      for (int r = 0; r < A; ++r) {
        const Mat& E = (*alg)[r];
        const Mat fc = k * (E * dcls[j] - dcls[j] * E) * adj_k;
        grad((2 * g + j) * A + r) = 2.0 * (M[g + j] * fc).trace().real();
      }
    }
    return grad;
  }

  void move(const RVec& dir, double t) {
    const int A = static_cast<int>(alg->size());
    for (int b = 0; b < blocks(); ++b) {
      Mat xi = Mat::Zero(n, n);
      for (int r = 0; r < A; ++r) xi += dir(b * A + r) * (*alg)[r];
      const Mat step = expm_skew(t * xi);
      if (b < 2 * g)
        us[b] = us[b] * step;
      else
        ks[b - 2 * g] = ks[b - 2 * g] * step;
    }
  }
};

void randomize_mu(MuProblem& p, Rng& rng) {
  p.us.assign(2 * p.g, Mat());
  for (int i = 0; i < 2 * p.g; ++i)
    p.us[i] = haar_sample(p.n, p.group, rng).m();
  p.ks.assign(p.l, Mat());
  for (int j = 0; j < p.l; ++j) p.ks[j] = haar_sample(p.n, p.group, rng).m();
}

}  // namespace

FinderResult find_representation(int n, Group group, int g,
                                 const std::vector<ClassSpec>& specs,
                                 const FinderConfig& cfg) {
  if (n < 1 || g < 0 || (g == 0 && specs.empty()))
    throw PreconditionError("find_representation: empty signature");
  for (const ClassSpec& s : specs)
    if (s.n != n) throw PreconditionError("find_representation: class size");
  const int l = static_cast<int>(specs.size());
  const std::vector<Mat> alg = algebra_basis(n, group);

  MuProblem base;
  base.n = n;
  base.group = group;
  base.g = g;
  base.l = l;
  base.specs = &specs;
  base.alg = &alg;
  for (const ClassSpec& s : specs) base.dcls.push_back(s.diag());

  // Determinant obstruction (trivial for SU specs).
  double phase_sum = 0;
  for (const ClassSpec& s : specs) phase_sum += s.phases.sum();
  const bool det_ok =
      std::abs(std::remainder(phase_sum, kTwoPi)) <= 1e-9 * std::max(1, n * l);

  Rng rng(cfg.seed, 0xF17D);
  FinderResult best;
  best.objective = std::numeric_limits<double>::infinity();
  const double success = std::max(cfg.tol_objective, 1e-10);

  for (int r = 0; r < std::max(1, cfg.restarts); ++r) {
    MuProblem p = base;
    randomize_mu(p, rng);
    if (r == 0) {
      // Exact seeds where the signature admits one.
      if (auto cols = torus_phases(n, specs)) {
        // Diagonal pair slots: every commutator is the identity.
        for (int i = 0; i < 2 * g; ++i) {
          const CVec d = random_unit_phases(n, group, rng);
          p.us[i] = d.asDiagonal();
        }
        // Reorder each class diagonal by the torus assignment; the
        // conjugator permutes the eigenvalues.
        for (int j = 0; j < l; ++j) {
          Mat kperm = Mat::Zero(n, n);
          std::vector<bool> used(n, false);
          for (int k = 0; k < n; ++k) {
            int src = -1;
            for (int q = 0; q < n; ++q)
              if (!used[q] &&
                  std::abs(circ_diff((*cols)[j](k), specs[j].phases(q))) <
                      1e-12) {
                src = q;
                break;
              }
            if (src < 0) {
              kperm = Mat::Identity(n, n);
              break;
            }
            used[src] = true;
            kperm(k, src) = 1;
          }
          p.ks[j] = kperm;
        }
      } else if (g >= 1 && det_ok) {
        for (int j = 0; j < l; ++j) p.ks[j] = Mat::Identity(n, n);
        Mat prod = Mat::Identity(n, n);
        for (int j = 0; j < l; ++j) prod = prod * base.dcls[j];
        const auto [ca, cb] = commutator_solution(prod.adjoint(), group);
        p.us[0] = ca;
        p.us[1] = cb;
        for (int i = 2; i < 2 * g; i += 2) {
          p.us[i] = haar_sample(n, group, rng).m();
          p.us[i + 1] = p.us[i];
        }
      }
    }
    auto [f, iters] = descend(p, cfg);
    if (f > cfg.tol_objective && f < 1e-3) {
      const auto [fp, itp] = lm_polish(p, 80);
      f = fp;
      iters += itp;
    }
    if (f < best.objective) {
      best.objective = f;
      best.x = p.tuple();
      best.iters = iters;
      best.restarts_used = r + 1;
    }
    // Certificate-grade accuracy wants headroom below the success threshold.
    if (best.objective <= std::max(cfg.tol_objective, 1e-15)) break;
  }
  best.found = best.objective <= success;
  return best;
}

// ---------------------------------------------------------------------------
// find_beta_fixed_representation: exact parametrization of Fix(beta) by the
// symmetric suffix chain N_j = exp(i S_j) and free a_i, with
// b_i = P_i tau(a_i) P_i^{-1}.

namespace {

struct BetaProblem {
  int n = 0;
  Group group = Group::U;
  int g = 0, l = 0;
  const std::vector<ClassSpec>* specs = nullptr;
  const std::vector<Mat>* alg = nullptr;
  const std::vector<RMat>* symb = nullptr;
  bool fix_first = false;  // g == 0: N_1 = 1 pins mu to 1 exactly

  std::vector<RMat> S;  // free chain exponents, chain positions first_free..l
  std::vector<Mat> a;   // g

  int first_free() const { return fix_first ? 2 : 1; }
  int nfree() const { return std::max(0, l - first_free() + 1); }
  int dim() const {
    return nfree() * static_cast<int>(symb->size()) +
           g * static_cast<int>(alg->size());
  }

  // N_j for j = 1..l+1 (identity beyond the chain and when pinned).
  std::vector<Mat> chain() const {
    std::vector<Mat> N(l + 2, Mat::Identity(n, n));
    for (int j = first_free(); j <= l; ++j)
      N[j] = expi_realsym(S[j - first_free()]);
    return N;
  }

  SurfaceTuple tuple() const {
    const std::vector<Mat> N = chain();
    SurfaceTuple x;
    x.n = n;
    x.group = group;
    x.g = g;
    x.l = l;
    x.cs.resize(l);
    for (int j = 1; j <= l; ++j) x.cs[j - 1] = N[j] * N[j + 1].adjoint();
    x.as = a;
    x.bs.resize(g);
    Mat P = N[1];
    for (int i = g - 1; i >= 0; --i) {
      x.bs[i] = P * tau(a[i]) * P.adjoint();
      P = a[i] * x.bs[i] * a[i].adjoint() * x.bs[i].adjoint() * P;
    }
    x.specs = *specs;
    return x;
  }

  double value() const {
    const SurfaceTuple x = tuple();
    double f = 0;
    for (int j = 0; j < l; ++j) {
      const UnitaryEig e = eig_unitary(x.cs[j]);
      RVec ph = e.phases;
      std::sort(ph.data(), ph.data() + n, std::greater<double>());
      f += phase_dist2(ph, (*specs)[j].phases);
    }
    if (g > 0) {
      Mat mu = Mat::Identity(n, n);
      for (int i = 0; i < g; ++i)
        mu = mu * (x.as[i] * x.bs[i] * x.as[i].adjoint() * x.bs[i].adjoint());
      const std::vector<Mat> N = chain();
      mu = mu * N[1];
      f += (mu - Mat::Identity(n, n)).squaredNorm();
    }
    return f;
  }

  // Per-phase circular differences at the locked matching, plus the relator
  // defect when g > 0; squaredNorm equals value().
  Eigen::VectorXd residuals() const {
    const SurfaceTuple x = tuple();
    Eigen::VectorXd r(l * n + (g > 0 ? 2 * n * n : 0));
    int c = 0;
    for (int j = 0; j < l; ++j) {
      const UnitaryEig e = eig_unitary(x.cs[j]);
      RVec ph = e.phases;
      std::sort(ph.data(), ph.data() + n, std::greater<double>());
      int shift = 0;
      phase_dist2(ph, (*specs)[j].phases, &shift);
      for (int k = 0; k < n; ++k)
        r(c++) = circ_diff(ph(k), (*specs)[j].phases((k + shift) % n));
    }
    if (g > 0) {
      Mat mu = Mat::Identity(n, n);
      for (int i = 0; i < g; ++i)
        mu = mu * (x.as[i] * x.bs[i] * x.as[i].adjoint() * x.bs[i].adjoint());
      const std::vector<Mat> N = chain();
      mu = mu * N[1];
      const Mat d = mu - Mat::Identity(n, n);
      for (int i = 0; i < n; ++i)
        for (int q = 0; q < n; ++q) {
          r(c++) = d(i, q).real();
          r(c++) = d(i, q).imag();
        }
    }
    return r;
  }

  // Objective with derivative along one seeded direction: S-block sj (chain
  // position, -1 none) with dS, or a-block ai with skew direction E.
  double directional(int sj, const RMat* dS, int ai, const Mat* dA) const {
    std::vector<Jet> N(l + 2, Jet::constant(Mat::Identity(n, n)));
    for (int j = first_free(); j <= l; ++j) {
      const RMat& Sj = S[j - first_free()];
      if (j == sj) {
        auto [v, d] = dexpi_realsym(Sj, *dS);
        N[j] = Jet::var(std::move(v), std::move(d));
      } else {
        N[j] = Jet::constant(expi_realsym(Sj));
      }
    }
    std::vector<Jet> c(l, Jet::constant(Mat()));
    for (int j = 1; j <= l; ++j) c[j - 1] = N[j] * inv_unitary(N[j + 1]);

    double dval = 0;
    double val = 0;
    for (int j = 0; j < l; ++j) {
      const auto [v, d] = spec_dist2_jet(c[j], (*specs)[j]);
      val += v;
      dval += d;
    }
    if (g > 0) {
      std::vector<Jet> aj(g, Jet::constant(Mat()));
      for (int i = 0; i < g; ++i)
        aj[i] = (i == ai) ? Jet::var(a[i], a[i] * (*dA))
                          : Jet::constant(a[i]);
      Jet P = N[1];
      std::vector<Jet> bj(g, Jet::constant(Mat()));
      for (int i = g - 1; i >= 0; --i) {
        bj[i] = P * conj_(aj[i]) * inv_unitary(P);
        P = comm_jet(aj[i], bj[i]) * P;
      }
      const Mat r = P.v - Mat::Identity(n, n);
      val += r.squaredNorm();
      dval += 2.0 * (r.adjoint() * P.d).trace().real();
    }
    (void)val;
    return dval;
  }

  RVec gradient() const {
    RVec grad(dim());
    int c = 0;
    for (int j = first_free(); j <= l; ++j)
      for (const RMat& B : *symb) grad(c++) = directional(j, &B, -1, nullptr);
    for (int i = 0; i < g; ++i)
      for (const Mat& E : *alg) grad(c++) = directional(-1, nullptr, i, &E);
    return grad;
  }

  void move(const RVec& dir, double t) {
    const int SB = static_cast<int>(symb->size());
    const int A = static_cast<int>(alg->size());
    int c = 0;
    for (int j = 0; j < nfree(); ++j) {
      for (int r = 0; r < SB; ++r) S[j] += (t * dir(c++)) * (*symb)[r];
    }
    for (int i = 0; i < g; ++i) {
      Mat xi = Mat::Zero(n, n);
      for (int r = 0; r < A; ++r) xi += dir(c++) * (*alg)[r];
      a[i] = a[i] * expm_skew(t * xi);
    }
  }
};

void randomize_beta(BetaProblem& p, Rng& rng, double scale) {
  p.S.assign(p.nfree(), RMat());
  for (int j = 0; j < p.nfree(); ++j) {
    RMat s(p.n, p.n);
    for (int r = 0; r < p.n; ++r)
      for (int q = r; q < p.n; ++q) s(r, q) = s(q, r) = scale * rng.gaussian();
    if (p.group == Group::SU) {
      const double t = s.trace() / p.n;
      for (int r = 0; r < p.n; ++r) s(r, r) -= t;
    }
    p.S[j] = s;
  }
  p.a.assign(p.g, Mat());
  for (int i = 0; i < p.g; ++i) p.a[i] = haar_sample(p.n, p.group, rng).m();
}

}  // namespace

FinderResult find_beta_fixed_representation(int n, Group group, int g,
                                            const std::vector<ClassSpec>& specs,
                                            const FinderConfig& cfg) {
  if (n < 1 || g < 0 || (g == 0 && specs.empty()))
    throw PreconditionError("find_beta_fixed_representation: empty signature");
  for (const ClassSpec& s : specs)
    if (s.n != n)
      throw PreconditionError("find_beta_fixed_representation: class size");
  const int l = static_cast<int>(specs.size());
  const std::vector<Mat> alg = algebra_basis(n, group);
  const std::vector<RMat> symb = sym_basis(n, group);

  Rng rng(cfg.seed, 0xBE7A);

  // Exact diagonal solutions first: chains of commuting diagonal slots.
  if (auto cols = torus_phases(n, specs)) {
    SurfaceTuple x;
    x.n = n;
    x.group = group;
    x.g = g;
    x.l = l;
    for (int j = 0; j < l; ++j) {
      CVec d(n);
      for (int k = 0; k < n; ++k) d(k) = std::polar(1.0, (*cols)[j](k));
      x.cs.push_back(d.asDiagonal());
    }
    for (int i = 0; i < g; ++i) {
      const CVec d = random_unit_phases(n, group, rng);
      x.as.push_back(d.asDiagonal());
      x.bs.push_back(Mat(d.asDiagonal()).conjugate());
    }
    x.specs = specs;
    FinderResult res;
    res.x = x;
    res.objective = 0;
    for (int j = 0; j < l; ++j) {
      const double sd = spec_distance(x.cs[j], specs[j]);
      res.objective += sd * sd;
    }
    res.found = true;
    return res;
  }

  BetaProblem base;
  base.n = n;
  base.group = group;
  base.g = g;
  base.l = l;
  base.specs = &specs;
  base.alg = &alg;
  base.symb = &symb;
  base.fix_first = (g == 0);

  FinderResult best;
  best.objective = std::numeric_limits<double>::infinity();
  const double success = std::max(cfg.tol_objective, 1e-10);

  for (int r = 0; r < std::max(1, cfg.restarts); ++r) {
    BetaProblem p = base;
    randomize_beta(p, rng, r == 0 ? 0.3 : 1.0);
    auto [f, iters] = descend(p, cfg);
    if (f > cfg.tol_objective && f < 1e-3) {
      const auto [fp, itp] = lm_polish(p, 80);
      f = fp;
      iters += itp;
    }
    if (f < best.objective) {
      best.objective = f;
      best.x = p.tuple();
      best.iters = iters;
      best.restarts_used = r + 1;
    }
    // Certificate-grade accuracy wants headroom below the success threshold.
    if (best.objective <= std::max(cfg.tol_objective, 1e-15)) break;
  }
  best.found = best.objective <= success;
  return best;
}

// ---------------------------------------------------------------------------

IsotropyReport isotropy_report(const SurfaceTuple& x, const Tolerances& tol) {
  x.validate(tol);
  const std::vector<Mat> basis = algebra_basis(x.n, x.group);
  const int d = static_cast<int>(basis.size());
  std::vector<const Mat*> slots;
  for (int i = 0; i < x.g; ++i) {
    slots.push_back(&x.as[i]);
    slots.push_back(&x.bs[i]);
  }
  for (int j = 0; j < x.l; ++j) slots.push_back(&x.cs[j]);
  const int m = static_cast<int>(slots.size());
  RMat A(2 * x.n * x.n * m, d);
  for (int r = 0; r < d; ++r) {
    int row = 0;
    for (int s = 0; s < m; ++s) {
      const Mat c = basis[r] * (*slots[s]) - (*slots[s]) * basis[r];
      for (int p = 0; p < x.n; ++p)
        for (int q = 0; q < x.n; ++q) {
          A(row++, r) = c(p, q).real();
          A(row++, r) = c(p, q).imag();
        }
    }
  }
  Eigen::JacobiSVD<RMat> svd(A);
  const RVec sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double cut = tol.rank_gap * std::max(smax, 1.0);
  int nullity = 0;
  for (int k = d - 1; k >= 0; --k) {
    if (sv(k) <= cut)
      ++nullity;
    else
      break;
  }
  IsotropyReport rep;
  rep.dim = nullity;
  if (nullity > 0 && nullity < d)
    rep.gap = sv(d - nullity - 1) / std::max(sv(d - nullity), 1e-300);
  rep.irreducible = (x.group == Group::U) ? (nullity == 1) : (nullity == 0);
  return rep;
}

// ---------------------------------------------------------------------------
// SU(2) polytope clouds and oracles. Quaternion coordinates
// u = a0 + i(a1 s1 + a2 s2 + a3 s3); symmetric means a2 = 0; the alcove
// angle is acos(a0).

namespace {

void check_angles(const std::vector<double>& th) {
  if (th.empty()) throw PreconditionError("need at least one class angle");
  for (double t : th)
    if (!(t >= 0.0 && t <= M_PI + 1e-12))
      throw PreconditionError("class angle outside [0, pi]");
}

}  // namespace

PolytopeCloud polytope_sample_su2(const std::vector<double>& class_angles,
                                  int samples, bool beta_fixed,
                                  uint64_t seed) {
  check_angles(class_angles);
  if (samples < 1) throw PreconditionError("samples must be positive");
  const int k = static_cast<int>(class_angles.size());
  const auto& K = kern::ops();
  Rng rng(seed, beta_fixed ? 0xBE7Au : 0xF011u);

  PolytopeCloud cloud;
  cloud.angles.reserve(samples);
  cloud.lane = K.name;
  double lo_a0 = 1.0, hi_a0 = -1.0;

  const int chunk = std::min(samples, 1 << 18);
  std::vector<double> s0(chunk), s1(chunk), s2(chunk), s3(chunk);
  std::vector<double> g0(chunk), g1(chunk), g2(chunk), g3(chunk);

  int remaining = samples;
  while (remaining > 0) {
    const int m = std::min(remaining, chunk);
    const double cl = std::cos(class_angles[k - 1]);
    const double sl = std::sin(class_angles[k - 1]);
    if (beta_fixed) {
      // coords (a0, a1, a3) on the symmetric equator sphere
      for (int i = 0; i < m; ++i) {
        double x, z, q;
        do {
          x = rng.gaussian();
          z = rng.gaussian();
          q = x * x + z * z;
        } while (q < 1e-30);
        const double inv = 1.0 / std::sqrt(q);
        s0[i] = cl;
        s1[i] = sl * x * inv;
        s2[i] = sl * z * inv;
      }
      for (int j = k - 2; j >= 0; --j) {
        for (int i = 0; i < m; ++i) {
          g0[i] = rng.gaussian();
          g1[i] = rng.gaussian();
          g2[i] = rng.gaussian();
        }
        K.step3(s0.data(), s1.data(), s2.data(), g0.data(), g1.data(),
                g2.data(), std::cos(class_angles[j]),
                std::sin(class_angles[j]), m);
      }
    } else {
      for (int i = 0; i < m; ++i) {
        double x, y, z, q;
        do {
          x = rng.gaussian();
          y = rng.gaussian();
          z = rng.gaussian();
          q = x * x + y * y + z * z;
        } while (q < 1e-30);
        const double inv = 1.0 / std::sqrt(q);
        s0[i] = cl;
        s1[i] = sl * x * inv;
        s2[i] = sl * y * inv;
        s3[i] = sl * z * inv;
      }
      for (int j = k - 2; j >= 0; --j) {
        for (int i = 0; i < m; ++i) {
          g0[i] = rng.gaussian();
          g1[i] = rng.gaussian();
          g2[i] = rng.gaussian();
          g3[i] = rng.gaussian();
        }
        K.step4(s0.data(), s1.data(), s2.data(), s3.data(), g0.data(),
                g1.data(), g2.data(), g3.data(), std::cos(class_angles[j]),
                std::sin(class_angles[j]), m);
      }
    }
    double clo = 0, chi = 0;
    K.minmax(s0.data(), m, &clo, &chi);
    lo_a0 = std::min(lo_a0, clo);
    hi_a0 = std::max(hi_a0, chi);
    for (int i = 0; i < m; ++i)
      cloud.angles.push_back(std::acos(std::clamp(s0[i], -1.0, 1.0)));
    remaining -= m;
  }
  cloud.lo = std::acos(std::clamp(hi_a0, -1.0, 1.0));
  cloud.hi = std::acos(std::clamp(lo_a0, -1.0, 1.0));
  return cloud;
}

namespace {

struct Quat {
  double w, x, y, z;
};

Quat hamilton(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

}  // namespace

Interval su2_interval_oracle(const std::vector<double>& class_angles,
                             int draws, uint64_t seed) {
  check_angles(class_angles);
  if (draws < 1) throw PreconditionError("draws must be positive");
  Rng rng(seed, 0x0AC1E);
  double lo_a0 = 1.0, hi_a0 = -1.0;
  for (int t = 0; t < draws; ++t) {
    Quat q{1, 0, 0, 0};
    for (double th : class_angles) {
      double x, y, z, n2;
      do {
        x = rng.gaussian();
        y = rng.gaussian();
        z = rng.gaussian();
        n2 = x * x + y * y + z * z;
      } while (n2 < 1e-30);
      const double f = std::sin(th) / std::sqrt(n2);
      q = hamilton(q, Quat{std::cos(th), f * x, f * y, f * z});
    }
    lo_a0 = std::min(lo_a0, q.w);
    hi_a0 = std::max(hi_a0, q.w);
  }
  return {std::acos(std::clamp(hi_a0, -1.0, 1.0)),
          std::acos(std::clamp(lo_a0, -1.0, 1.0))};
}

Interval su2_interval_exact(const std::vector<double>& class_angles) {
  check_angles(class_angles);
  double lo = class_angles[0], hi = class_angles[0];
  for (size_t j = 1; j < class_angles.size(); ++j) {
    const double t = class_angles[j];
    const double nlo =
        (t >= lo && t <= hi) ? 0.0 : std::min(std::abs(lo - t), std::abs(hi - t));
    const double xs = std::clamp(M_PI - t, lo, hi);
    const double nhi = std::min(xs + t, kTwoPi - xs - t);
    lo = nlo;
    hi = nhi;
  }
  return {lo, hi};
}

double su2_feasibility_margin(const std::vector<double>& class_angles,
                              int draws, uint64_t seed) {
  check_angles(class_angles);
  const int k = static_cast<int>(class_angles.size());
  const double t = class_angles[k - 1];
  Interval iv{0.0, 0.0};
  if (k > 1) {
    std::vector<double> head(class_angles.begin(), class_angles.end() - 1);
    iv = su2_interval_oracle(head, draws, seed);
  }
  return std::min(t - iv.lo, iv.hi - t);
}

bool su2_feasible_oracle(const std::vector<double>& class_angles, int draws,
                         uint64_t seed, double slack) {
  return su2_feasibility_margin(class_angles, draws, seed) >= -slack;
}

// ---------------------------------------------------------------------------

namespace {

template <class P>
GradCheckReport gradient_check_impl(P base, int points, double h,
                                    uint64_t seed,
                                    void (*randomize)(P&, Rng&)) {
  GradCheckReport rep;
  rep.points = points;
  Rng rng(seed, 0x6AADC);
  for (int t = 0; t < points; ++t) {
    P p = base;
    randomize(p, rng);
    const RVec ga = p.gradient();
    RVec gf(p.dim());
    for (int r = 0; r < p.dim(); ++r) {
      RVec e = RVec::Zero(p.dim());
      e(r) = 1;
      P pp = p, pm = p;
      pp.move(e, h);
      pm.move(e, -h);
      gf(r) = (pp.value() - pm.value()) / (2 * h);
    }
    const double rel = (ga - gf).norm() / std::max(gf.norm(), 1e-12);
    rep.max_rel_err = std::max(rep.max_rel_err, rel);
  }
  return rep;
}

}  // namespace

GradCheckReport gradient_check_mu(int n, Group group, int g,
                                  const std::vector<ClassSpec>& specs,
                                  int points, double h, uint64_t seed) {
  const std::vector<Mat> alg = algebra_basis(n, group);
  MuProblem base;
  base.n = n;
  base.group = group;
  base.g = g;
  base.l = static_cast<int>(specs.size());
  base.specs = &specs;
  base.alg = &alg;
  for (const ClassSpec& s : specs) base.dcls.push_back(s.diag());
  return gradient_check_impl<MuProblem>(
      base, points, h, seed, +[](MuProblem& p, Rng& r) { randomize_mu(p, r); });
}

GradCheckReport gradient_check_beta_fixed(int n, Group group, int g,
                                          const std::vector<ClassSpec>& specs,
                                          int points, double h,
                                          uint64_t seed) {
  const std::vector<Mat> alg = algebra_basis(n, group);
  const std::vector<RMat> symb = sym_basis(n, group);
  BetaProblem base;
  base.n = n;
  base.group = group;
  base.g = g;
  base.l = static_cast<int>(specs.size());
  base.specs = &specs;
  base.alg = &alg;
  base.symb = &symb;
  base.fix_first = (g == 0);
  return gradient_check_impl<BetaProblem>(
      base, points, h, seed,
      +[](BetaProblem& p, Rng& r) { randomize_beta(p, r, 1.0); });
}

}  // namespace surfrep
