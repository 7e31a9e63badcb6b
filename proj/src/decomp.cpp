#include "surfrep/decomp.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "surfrep/lie.hpp"

namespace surfrep {

namespace {

// Chain as one cyclic list: s_0..s_{g-1} = v, s_g..s_{g+l-1} = w.
std::vector<const Mat*> chain_view(const Witness& w) {
  std::vector<const Mat*> s;
  for (const Mat& v : w.vs) s.push_back(&v);
  for (const Mat& ww : w.ws) s.push_back(&ww);
  return s;
}

double slot_distance(const SurfaceTuple& x, const SurfaceTuple& y) {
  double r = 0;
  for (int i = 0; i < x.g; ++i) {
    r = std::max(r, fnorm(x.as[i] - y.as[i]));
    r = std::max(r, fnorm(x.bs[i] - y.bs[i]));
  }
  for (int j = 0; j < x.l; ++j) r = std::max(r, fnorm(x.cs[j] - y.cs[j]));
  return r;
}

}  // namespace

WitnessReport check_witness(const SurfaceTuple& x, const Witness& w,
                            double tol, const Tolerances& tols) {
  x.validate(tols);
  if ((int)w.vs.size() != x.g || (int)w.ws.size() != x.l)
    throw PreconditionError("witness chain sizes do not match signature");
  const double mu_res = fnorm(momentum(x) - Mat::Identity(x.n, x.n));
  if (mu_res > tols.momentum_one)
    throw PreconditionError("tuple is not a representation: ||mu - 1|| = " +
                            std::to_string(mu_res));

  WitnessReport rep;
  for (const Mat& v : w.vs) {
    validate_unitary(v, Group::U, tols, "witness chain element");
    rep.res_symmetry = std::max(rep.res_symmetry, sym_defect(v));
  }
  for (const Mat& ww : w.ws) {
    validate_unitary(ww, Group::U, tols, "witness chain element");
    rep.res_symmetry = std::max(rep.res_symmetry, sym_defect(ww));
  }
  validate_unitary(w.phi, Group::U, tols, "witness phi");
  rep.res_symmetry = std::max(rep.res_symmetry, sym_defect(w.phi));

  const auto s = chain_view(w);
  const int m = (int)s.size();
  if (m == 0) {
    rep.ok = true;
    rep.detail = "empty signature";
    return rep;
  }
  for (int i = 0; i < x.g; ++i) {
    const Mat comm = x.as[i] * x.bs[i] * x.as[i].adjoint() * x.bs[i].adjoint();
    const Mat step = (*s[i]) * s[(i + 1) % m]->adjoint();
    rep.res_chain = std::max(rep.res_chain, fnorm(comm - step));
    const Mat& vnext = *s[(i + 1) % m];
    rep.res_pairing = std::max(
        rep.res_pairing,
        fnorm(tau(x.as[i]) - vnext.adjoint() * x.bs[i] * vnext));
  }
  for (int j = 0; j < x.l; ++j) {
    const int k = x.g + j;
    const Mat step = (*s[k]) * s[(k + 1) % m]->adjoint();
    rep.res_chain = std::max(rep.res_chain, fnorm(x.cs[j] - step));
  }

  const SurfaceTuple bx = beta_numeric(x);
  const SurfaceTuple px = act(w.phi, x);
  rep.res_characterization = slot_distance(bx, px);

  rep.ok = rep.res_symmetry <= tol && rep.res_chain <= tol &&
           rep.res_pairing <= tol && rep.res_characterization <= tol;
  if (!rep.ok) {
    std::ostringstream os;
    os << "sym=" << rep.res_symmetry << " chain=" << rep.res_chain
       << " pairing=" << rep.res_pairing
       << " char=" << rep.res_characterization;
    rep.detail = os.str();
  }
  return rep;
}

Witness witness_from_phi(const SurfaceTuple& x, const Mat& phi) {
  Witness w;
  const Mat phinv = phi.adjoint();
  // Suffix products of the relator word, deepest factor first.
  Mat suffix = Mat::Identity(x.n, x.n);
  w.ws.resize(x.l);
  for (int j = x.l - 1; j >= 0; --j) {
    suffix = x.cs[j] * suffix;
    w.ws[j] = suffix * phinv;
  }
  w.vs.resize(x.g);
  for (int i = x.g - 1; i >= 0; --i) {
    suffix =
        x.as[i] * x.bs[i] * x.as[i].adjoint() * x.bs[i].adjoint() * suffix;
    w.vs[i] = suffix * phinv;
  }
  w.phi = phi;
  return w;
}

Witness transform_witness(const Witness& w, const Mat& u) {
  Witness out;
  const Mat ut = u.transpose();
  out.vs.reserve(w.vs.size());
  out.ws.reserve(w.ws.size());
  for (const Mat& v : w.vs) out.vs.push_back(u * v * ut);
  for (const Mat& ww : w.ws) out.ws.push_back(u * ww * ut);
  out.phi = u.conjugate() * w.phi * u.adjoint();
  return out;
}

namespace {

std::vector<Mat> all_slots(const SurfaceTuple& x) {
  std::vector<Mat> s;
  for (int i = 0; i < x.g; ++i) {
    s.push_back(x.as[i]);
    s.push_back(x.bs[i]);
  }
  for (int j = 0; j < x.l; ++j) s.push_back(x.cs[j]);
  return s;
}

double min_phase_gap(const RVec& phases) {
  const int n = (int)phases.size();
  if (n < 2) return 2 * M_PI;
  std::vector<double> p(phases.data(), phases.data() + n);
  std::sort(p.begin(), p.end());
  double gap = 2 * M_PI - (p[n - 1] - p[0]);
  for (int i = 1; i < n; ++i) gap = std::min(gap, p[i] - p[i - 1]);
  return gap;
}

double conj_residual(const std::vector<Mat>& lhs, const std::vector<Mat>& rhs,
                     const Mat& phi) {
  double r = 0;
  for (size_t i = 0; i < lhs.size(); ++i)
    r = std::max(r, fnorm(lhs[i] * phi - phi * rhs[i]));
  return r;
}

// Least squares for sum_s ||beta_s - phi x_s phi^-1||^2 over Fix(tau_minus).
// The search runs in the exact chart phi = exp(iS), S real symmetric, so
// every iterate is a symmetric unitary by construction; a candidate off the
// fixed locus can never win on a degenerate (flat) objective.
// Levenberg-Marquardt: a near-degenerate slot spectrum leaves the valley
// ill-conditioned and plain gradient descent stalls there.
Mat polish_phi(const std::vector<Mat>& bslots, const std::vector<Mat>& xslots,
               RMat S, int iters) {
  const int n = (int)S.rows();
  const int m = (int)xslots.size();
  std::vector<RMat> dirs;
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) {
      RMat e = RMat::Zero(n, n);
      e(p, q) = e(q, p) = 1.0;
      dirs.push_back(e);
    }
  const int dim = (int)dirs.size();
  const int rows = m * 2 * n * n;
  auto residual_of = [&](const Mat& p) {
    Eigen::VectorXd r(rows);
    for (int s = 0; s < m; ++s) {
      const Mat R = bslots[s] - p * xslots[s] * p.adjoint();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const int at = (s * n + i) * n + j;
          r(2 * at) = R(i, j).real();
          r(2 * at + 1) = R(i, j).imag();
        }
    }
    return r;
  };
  Mat phi = expi_realsym(S);
  Eigen::VectorXd r = residual_of(phi);
  double f = r.squaredNorm();
  double lambda = 1e-3;
  for (int it = 0; it < iters && f > 1e-26; ++it) {
    Eigen::MatrixXd J(rows, dim);
    for (int d = 0; d < dim; ++d) {
      const auto [val, dphi] = dexpi_realsym(S, dirs[d]);
      for (int s = 0; s < m; ++s) {
        const Mat dR = -(dphi * xslots[s] * val.adjoint() +
                         val * xslots[s] * dphi.adjoint());
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            const int at = (s * n + i) * n + j;
            J(2 * at, d) = dR(i, j).real();
            J(2 * at + 1, d) = dR(i, j).imag();
          }
      }
    }
    const Eigen::MatrixXd JtJ = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    if (g.norm() < 1e-15) break;
    bool accepted = false;
    for (int tries = 0; tries < 30; ++tries) {
      Eigen::MatrixXd A = JtJ;
      A.diagonal().array() += lambda;
      const Eigen::VectorXd h = A.ldlt().solve(-g);
      RMat Sc = S;
      for (int d = 0; d < dim; ++d) Sc += h(d) * dirs[d];
      const Mat pc = expi_realsym(Sc);
      const Eigen::VectorXd rc = residual_of(pc);
      const double fc = rc.squaredNorm();
      if (fc < f) {
        S = Sc;
        phi = pc;
        r = rc;
        f = fc;
        lambda = std::max(lambda * 0.3, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 10;
      if (lambda > 1e12) break;
    }
    if (!accepted) break;
  }
  return phi;
}

}  // namespace

std::optional<PhiResult> solve_phi(const SurfaceTuple& x,
                                   const Tolerances& tol) {
  x.validate(tol);
  const int n = x.n;
  const double mu_res = fnorm(momentum(x) - Mat::Identity(n, n));
  if (mu_res > tol.momentum_one)
    throw PreconditionError("tuple is not a representation: ||mu - 1|| = " +
                            std::to_string(mu_res));

  const std::vector<Mat> xs = all_slots(x);
  const SurfaceTuple bx = beta_numeric(x);
  const std::vector<Mat> bs = all_slots(bx);
  const int m = (int)xs.size();
  if (m == 0) return std::nullopt;

  // Anchor: the slot with the cleanest spectrum. phi maps the anchor's
  // eigenbasis to the beta-image's, leaving only a torus factor free.
  int anchor = -1;
  double best_gap = 0;
  std::vector<UnitaryEig> eigs(m);
  for (int s = 0; s < m; ++s) {
    eigs[s] = eig_unitary(xs[s]);
    const double gap = min_phase_gap(eigs[s].phases);
    if (gap > best_gap) {
      best_gap = gap;
      anchor = s;
    }
  }

  bool generic = best_gap > 1e-6;
  Mat phi;
  if (generic) {
    const UnitaryEig& ex = eigs[anchor];
    const UnitaryEig eb = eig_unitary(bs[anchor]);
    // Conjugate matrices share spectra; match beta-image eigenvalues to the
    // anchor's, greedily on the circle.
    std::vector<int> match(n, -1);
    std::vector<bool> used(n, false);
    bool spectra_match = true;
    for (int p = 0; p < n; ++p) {
      int bestq = -1;
      double bestd = 1e300;
      for (int q = 0; q < n; ++q) {
        if (used[q]) continue;
        const double d = std::abs(circ_diff(ex.phases(p), eb.phases(q)));
        if (d < bestd) {
          bestd = d;
          bestq = q;
        }
      }
      if (bestd > 1e-6) {
        spectra_match = false;
        break;
      }
      match[p] = bestq;
      used[bestq] = true;
    }
    if (!spectra_match) return std::nullopt;
    Mat Vb(n, n);
    for (int p = 0; p < n; ++p) Vb.col(p) = eb.V.col(match[p]);

    // phi = Vb diag(delta) V^dagger; each slot equation beta_s phi = phi x_s
    // becomes B delta = delta X in these bases. Homogeneous least squares.
    const Mat& V = ex.V;
    Mat A = Mat::Zero(m * n * n, n);
    for (int s = 0; s < m; ++s) {
      const Mat B = Vb.adjoint() * bs[s] * Vb;
      const Mat X = V.adjoint() * xs[s] * V;
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          const int row = (s * n + p) * n + q;
          A(row, q) += B(p, q);
          A(row, p) -= X(p, q);
        }
    }
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinV);
    CVec delta = svd.matrixV().col(n - 1);
    for (int k = 0; k < n; ++k) {
      const double mag = std::abs(delta(k));
      if (mag < 0.1 / std::sqrt((double)n)) {
        generic = false;  // torus coordinate not pinned by the slots
        break;
      }
      delta(k) /= mag;
    }
    if (generic) {
      phi = Vb * delta.asDiagonal() * V.adjoint();
      // A near-degenerate spectrum can pass the gap test yet leave the
      // torus factor poorly determined; demote instead of failing.
      if (std::max(conj_residual(bs, xs, phi), sym_defect(phi)) >
          tol.phi_residual)
        generic = false;
    }
  }

  if (!generic) {
    // Non-generic fallback: polish from several symmetric starts.
    Mat best;
    double bestr = 1e300;
    Rng rng(0x51CA7E5, 0);
    for (int trial = 0; trial < 8; ++trial) {
      RMat S0 = RMat::Zero(n, n);
      if (trial > 0)
        for (int p = 0; p < n; ++p)
          for (int q = p; q < n; ++q) S0(p, q) = S0(q, p) = rng.gaussian();
      const Mat cand = polish_phi(bs, xs, S0, 400);
      const double r = std::max(conj_residual(bs, xs, cand), sym_defect(cand));
      if (r < bestr) {
        bestr = r;
        best = cand;
      }
    }
    phi = best;
  }

  PhiResult out;
  out.generic = generic;
  out.phi = phi;
  out.residual = std::max(conj_residual(bs, xs, phi), sym_defect(phi));
  if (out.residual > tol.phi_residual) return std::nullopt;
  return out;
}

DecompSample sample_decomposable(int n, Group group, int g, int l, Rng& rng) {
  if (g < 0 || l < 0 || g + l == 0)
    throw PreconditionError("signature must have g + l >= 1");
  SurfaceTuple x;
  x.n = n;
  x.group = group;
  x.g = g;
  x.l = l;
  x.as.resize(g);
  x.bs.resize(g);
  x.cs.resize(l);
  Witness wit;
  wit.vs.resize(g);
  wit.ws.resize(l);

  if (l == 0) {
    // Pure-handle case: the cyclic chain leaves no free slot to absorb the
    // closure, so sample a conjugated diagonal-torus tuple. Its commutators
    // vanish, the constant chain v_i = u u^T stays symmetric.
    const Mat u = haar_sample(n, group, rng).m();
    for (int i = 0; i < g; ++i) {
      CVec d(n);
      double sum = 0;
      for (int k = 0; k < n; ++k) {
        const double ph = 2 * M_PI * rng.uniform() - M_PI;
        d(k) = std::polar(1.0, ph);
        sum += ph;
      }
      if (group == Group::SU)
        for (int k = 0; k < n; ++k) d(k) *= std::polar(1.0, -sum / n);
      const Mat r = d.asDiagonal();
      x.as[i] = u * r * u.adjoint();
      x.bs[i] = u * r.conjugate() * u.adjoint();
      wit.vs[i] = u * u.transpose();
    }
    wit.phi = u.conjugate() * u.adjoint();
    for (int j = 0; j < x.l; ++j) x.specs.push_back(ClassSpec::of(x.cs[j], group));
    x.validate();
    return {x, wit};
  }

  // Symmetric class chain h_1..h_l; the last class closes the relator.
  std::vector<Mat> h(l);
  for (int j = 0; j < l; ++j) h[j] = symmetric_unitary_sample(n, group, rng);
  // Pair chain, built downward from v_{g+1} = h_1.
  Mat vnext = h[0];
  for (int i = g - 1; i >= 0; --i) {
    x.as[i] = haar_sample(n, group, rng).m();
    x.bs[i] = vnext * tau(x.as[i]) * vnext.adjoint();
    const Mat comm =
        x.as[i] * x.bs[i] * x.as[i].adjoint() * x.bs[i].adjoint();
    wit.vs[i] = comm * vnext;
    vnext = wit.vs[i];
  }
  const Mat v1 = g > 0 ? wit.vs[0] : h[0];
  for (int j = 0; j < l; ++j) {
    wit.ws[j] = h[j];
    const Mat& next = j + 1 < l ? h[j + 1] : v1;
    x.cs[j] = h[j] * next.adjoint();
  }
  wit.phi = v1.adjoint();
  for (int j = 0; j < l; ++j) x.specs.push_back(ClassSpec::of(x.cs[j], group));
  x.validate();
  return {x, wit};
}

}  // namespace surfrep
