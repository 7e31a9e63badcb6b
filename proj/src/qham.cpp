#include "surfrep/qham.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace surfrep {

void SurfaceTuple::validate(const Tolerances& tol) const {
  if (g < 0 || l < 0 || g + l < 1)
    throw ValidationError("SurfaceTuple: need g + l >= 1");
  if (static_cast<int>(as.size()) != g || static_cast<int>(bs.size()) != g ||
      static_cast<int>(cs.size()) != l ||
      static_cast<int>(specs.size()) != l)
    throw ValidationError("SurfaceTuple: slot count mismatch");
  for (int i = 0; i < g; ++i) {
    validate_unitary(as[i], group, tol, "SurfaceTuple pair slot a");
    validate_unitary(bs[i], group, tol, "SurfaceTuple pair slot b");
    if (as[i].rows() != n || bs[i].rows() != n)
      throw ValidationError("SurfaceTuple: size mismatch");
  }
  for (int j = 0; j < l; ++j) {
    validate_unitary(cs[j], group, tol, "SurfaceTuple class slot");
    if (cs[j].rows() != n || specs[j].n != n)
      throw ValidationError("SurfaceTuple: size mismatch");
    const double d = spec_distance(cs[j], specs[j]);
    if (!(d <= tol.class_membership))
      throw ValidationError("SurfaceTuple: class slot off its class by " +
                            std::to_string(d));
  }
}

SurfaceTuple SurfaceTuple::checked(int n, Group group, std::vector<Mat> as,
                                   std::vector<Mat> bs, std::vector<Mat> cs,
                                   std::vector<ClassSpec> specs,
                                   const Tolerances& tol) {
  SurfaceTuple x;
  x.n = n;
  x.group = group;
  x.g = static_cast<int>(as.size());
  x.l = static_cast<int>(cs.size());
  x.as = std::move(as);
  x.bs = std::move(bs);
  x.cs = std::move(cs);
  if (specs.empty())
    for (int j = 0; j < x.l; ++j) specs.push_back(ClassSpec::of(x.cs[j], x.group));
  x.specs = std::move(specs);
  x.validate(tol);
  return x;
}

Tangent Tangent::zero(const SurfaceTuple& x) {
  Tangent t;
  const Mat z = Mat::Zero(x.n, x.n);
  t.xa.assign(x.g, z);
  t.xb.assign(x.g, z);
  t.xc.assign(x.l, z);
  return t;
}

namespace {

// Shared word map for the involution: works on Mat (values) and Jet
// (values with directional derivatives).
template <class M>
void beta_core(int g, int l, const std::vector<M>& a, const std::vector<M>& b,
               const std::vector<M>& c, const M& id, std::vector<M>& out_a,
               std::vector<M>& out_b, std::vector<M>& out_c) {
  // q[j] = c_{j+1} ... c_l (j = 0..l), q[l] = 1.
  std::vector<M> q(l + 1, id);
  for (int j = l - 1; j >= 0; --j) q[j] = c[j] * q[j + 1];
  // p[i] = [a_{i+1}, b_{i+1}] ... [a_g, b_g] c_1 ... c_l (i = 0..g).
  std::vector<M> p(g + 1, q[0]);
  for (int i = g - 1; i >= 0; --i)
    p[i] = commutator_of(a[i], b[i]) * p[i + 1];

  out_a.clear();
  out_b.clear();
  out_c.clear();
  for (int i = 1; i <= g; ++i) {
    const M pre = trans(p[i]);
    const M post = conj_(p[i]);
    out_a.push_back(pre * conj_(b[i - 1]) * post);
    out_b.push_back(pre * conj_(a[i - 1]) * post);
  }
  for (int j = 1; j <= l; ++j)
    out_c.push_back(trans(q[j]) * trans(c[j - 1]) * conj_(q[j]));
}

Mat skew_clean(const Mat& x) { return 0.5 * (x - x.adjoint()); }

}  // namespace

Mat momentum(const SurfaceTuple& x) {
  Mat m = Mat::Identity(x.n, x.n);
  for (int i = 0; i < x.g; ++i)
    m = m * commutator_of(x.as[i], x.bs[i]);
  for (int j = 0; j < x.l; ++j) m = m * x.cs[j];
  return m;
}

SurfaceTuple act(const Mat& u, const SurfaceTuple& x) {
  SurfaceTuple y = x;
  const Mat ui = u.adjoint();
  for (Mat& m : y.as) m = u * m * ui;
  for (Mat& m : y.bs) m = u * m * ui;
  for (Mat& m : y.cs) m = u * m * ui;
  return y;
}

SurfaceTuple beta_numeric(const SurfaceTuple& x) {
  SurfaceTuple y = x;
  const Mat id = Mat::Identity(x.n, x.n);
  beta_core<Mat>(x.g, x.l, x.as, x.bs, x.cs, id, y.as, y.bs, y.cs);
  return y;
}

SurfaceTuple random_tuple(int n, Group g_, int g, int l, Rng& rng) {
  SurfaceTuple x;
  x.n = n;
  x.group = g_;
  x.g = g;
  x.l = l;
  for (int i = 0; i < g; ++i) {
    x.as.push_back(haar_sample(n, g_, rng).m());
    x.bs.push_back(haar_sample(n, g_, rng).m());
  }
  for (int j = 0; j < l; ++j) {
    const Mat u = haar_sample(n, g_, rng).m();
    x.cs.push_back(u);
    x.specs.push_back(ClassSpec::of(u, g_));
  }
  return x;
}

SurfaceTuple random_tuple_on_relation(int n, Group g_, int g, int l,
                                      Rng& rng) {
  if (g + l < 1) throw ValidationError("random_tuple_on_relation: empty");
  SurfaceTuple x;
  x.n = n;
  x.group = g_;
  x.g = g;
  x.l = l;
  if (l >= 1) {
    for (int i = 0; i < g; ++i) {
      x.as.push_back(haar_sample(n, g_, rng).m());
      x.bs.push_back(haar_sample(n, g_, rng).m());
    }
    Mat pre = Mat::Identity(n, n);
    for (int i = 0; i < g; ++i)
      pre = pre * commutator_of(x.as[i], x.bs[i]);
    for (int j = 0; j + 1 < l; ++j) {
      const Mat u = haar_sample(n, g_, rng).m();
      x.cs.push_back(u);
      pre = pre * u;
    }
    x.cs.push_back(pre.adjoint());
    for (int j = 0; j < l; ++j) x.specs.push_back(ClassSpec::of(x.cs[j], g_));
    return x;
  }
  // l = 0: close with a last pair whose commutator hits the prefix inverse.
  for (int i = 0; i + 1 < g; ++i) {
    x.as.push_back(haar_sample(n, g_, rng).m());
    x.bs.push_back(haar_sample(n, g_, rng).m());
  }
  Mat pre = Mat::Identity(n, n);
  for (int i = 0; i + 1 < g; ++i)
    pre = pre * commutator_of(x.as[i], x.bs[i]);
  const Mat m = pre.adjoint();  // need [a_g, b_g] = m; det m = 1
  if ((m - Mat::Identity(n, n)).norm() < 1e-14) {
    // Commuting pair: b diagonal in the eigenbasis of a.
    const Mat a = haar_sample(n, g_, rng).m();
    const UnitaryEig ea = eig_unitary(a);
    CVec d(n);
    double s = 0;
    for (int k = 0; k < n; ++k) {
      const double th = rng.uniform(0, 6.283185307179586);
      d(k) = std::polar(1.0, th);
      s += th;
    }
    if (g_ == Group::SU)
      for (int k = 0; k < n; ++k) d(k) *= std::polar(1.0, -s / n);
    x.as.push_back(a);
    x.bs.push_back(ea.V * d.asDiagonal() * ea.V.adjoint());
  } else {
    // m = V D V*; with the cyclic shift P and a diagonal beta solving
    // beta_{k-1} = beta_k e^{i phi_k}, [P, beta] = D.
    const UnitaryEig em = eig_unitary(m);
    Mat perm = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k) perm((k + 1) % n, k) = 1.0;
    CVec beta(n);
    beta(n - 1) = 1.0;
    for (int k = n - 1; k >= 1; --k)
      beta(k - 1) = beta(k) * em.d(k);
    // Consistency around the cycle uses det m = 1; absorb the residual phase.
    Mat bd = beta.asDiagonal();
    const Mat ag = em.V * perm * em.V.adjoint();
    const Mat bg = em.V * bd * em.V.adjoint();
    x.as.push_back(ag);
    x.bs.push_back(bg);
  }
  return x;
}

SurfaceTuple random_tuple_in_classes(Group g_, int g,
                                     const std::vector<ClassSpec>& specs,
                                     Rng& rng) {
  if (specs.empty()) throw ValidationError("random_tuple_in_classes: no specs");
  SurfaceTuple x;
  x.n = specs[0].n;
  x.group = g_;
  x.g = g;
  x.l = static_cast<int>(specs.size());
  for (int i = 0; i < g; ++i) {
    x.as.push_back(haar_sample(x.n, g_, rng).m());
    x.bs.push_back(haar_sample(x.n, g_, rng).m());
  }
  for (const ClassSpec& s : specs) {
    const Mat u = haar_sample(x.n, g_, rng).m();
    x.cs.push_back(u * s.diag() * u.adjoint());
    x.specs.push_back(s);
  }
  return x;
}

Tangent random_tangent(const SurfaceTuple& x, Rng& rng, double scale) {
  Tangent t;
  for (int i = 0; i < x.g; ++i) {
    t.xa.push_back(skew_sample(x.n, x.group, rng, scale));
    t.xb.push_back(skew_sample(x.n, x.group, rng, scale));
  }
  for (int j = 0; j < x.l; ++j)
    t.xc.push_back(skew_sample(x.n, x.group, rng, scale));
  return t;
}

double omega_double(const Mat& a, const Mat& b, const Mat& v1, const Mat& w1,
                    const Mat& v2, const Mat& w2) {
  const Mat ai = a.adjoint();
  const Mat bi = b.adjoint();
  const Mat av1 = ai * v1, av2 = ai * v2;
  const Mat bw1 = bi * w1, bw2 = bi * w2;
  const double t1 = 0.5 * (ip(av1, w2 * bi) - ip(av2, w1 * bi));
  const double t2 = 0.5 * (ip(v1 * ai, bw2) - ip(v2 * ai, bw1));
  const double t3 = 0.5 * ip(ai * bw1 * a + av1, bw2 + bi * av2 * b);
  const double t4 = -0.5 * ip(bi * av1 * b + bw1, av2 + ai * bw2 * a);
  return t1 + t2 + t3 + t4;
}

double omega_class(const Mat& c, const Mat& x, const Mat& y) {
  const Mat ci = c.adjoint();
  return 0.5 * (ip(c * x * ci, y) - ip(x, c * y * ci));
}

namespace {

// Per-factor momentum values and derivatives for the fused form: factors are
// the g doubles (mu = [a,b]) followed by the l classes (mu = c).
struct FactorDiff {
  std::vector<Mat> val;            // factor momenta
  std::vector<Mat> dot;            // d(factor momentum) . t
  std::vector<Mat> sval, sdot;     // tail products: s[k] = val[k] ... val[m-1]
};

FactorDiff factor_diff(const SurfaceTuple& x, const Tangent& t) {
  const int m = x.g + x.l;
  FactorDiff f;
  f.val.resize(m);
  f.dot.resize(m);
  for (int i = 0; i < x.g; ++i) {
    const Jet a = Jet::var(x.as[i], x.as[i] * t.xa[i]);
    const Jet b = Jet::var(x.bs[i], x.bs[i] * t.xb[i]);
    const Jet cm = commutator_of(a, b);
    f.val[i] = cm.v;
    f.dot[i] = cm.d;
  }
  for (int j = 0; j < x.l; ++j) {
    f.val[x.g + j] = x.cs[j];
    f.dot[x.g + j] = t.xc[j] * x.cs[j] - x.cs[j] * t.xc[j];
  }
  f.sval.assign(m + 1, Mat::Identity(x.n, x.n));
  f.sdot.assign(m + 1, Mat::Zero(x.n, x.n));
  for (int k = m - 1; k >= 0; --k) {
    f.sval[k] = f.val[k] * f.sval[k + 1];
    f.sdot[k] = f.dot[k] * f.sval[k + 1] + f.val[k] * f.sdot[k + 1];
  }
  return f;
}

}  // namespace

double omega_fused(const SurfaceTuple& x, const Tangent& t1,
                   const Tangent& t2) {
  double total = 0.0;
  for (int i = 0; i < x.g; ++i)
    total += omega_double(x.as[i], x.bs[i], x.as[i] * t1.xa[i],
                          x.bs[i] * t1.xb[i], x.as[i] * t2.xa[i],
                          x.bs[i] * t2.xb[i]);
  for (int j = 0; j < x.l; ++j)
    total += omega_class(x.cs[j], t1.xc[j], t2.xc[j]);

  const int m = x.g + x.l;
  if (m >= 2) {
    const FactorDiff f1 = factor_diff(x, t1);
    const FactorDiff f2 = factor_diff(x, t2);
    for (int k = 0; k + 1 < m; ++k) {
      const Mat vi = f1.val[k].adjoint();
      const Mat si = f1.sval[k + 1].adjoint();
      const Mat l1 = vi * f1.dot[k];
      const Mat l2 = vi * f2.dot[k];
      const Mat r1 = f1.sdot[k + 1] * si;
      const Mat r2 = f2.sdot[k + 1] * si;
      total += 0.5 * (ip(l1, r2) - ip(l2, r1));
    }
  }
  return total;
}

Mat dmomentum(const SurfaceTuple& x, const Tangent& t) {
  const FactorDiff f = factor_diff(x, t);
  return f.sdot.empty() ? Mat::Zero(x.n, x.n) : f.sdot[0];
}

Mat class_generator_from_velocity(const Mat& c, const Mat& vel) {
  const UnitaryEig e = eig_unitary(c);
  const Mat w = e.V.adjoint() * vel * e.V;
  const int n = static_cast<int>(c.rows());
  Mat y = Mat::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const Cplx dq = e.d(q) - e.d(p);
      if (std::abs(dq) > 1e-8) y(p, q) = w(p, q) / dq;
    }
  return skew_clean(e.V * y * e.V.adjoint());
}

namespace {

Tangent velocities_to_tangent(const SurfaceTuple& at,
                              const std::vector<Mat>& va,
                              const std::vector<Mat>& vb,
                              const std::vector<Mat>& vc) {
  Tangent t;
  for (int i = 0; i < at.g; ++i) {
    t.xa.push_back(skew_clean(at.as[i].adjoint() * va[i]));
    t.xb.push_back(skew_clean(at.bs[i].adjoint() * vb[i]));
  }
  for (int j = 0; j < at.l; ++j)
    t.xc.push_back(class_generator_from_velocity(at.cs[j], vc[j]));
  return t;
}

}  // namespace

Tangent dbeta(const SurfaceTuple& x, const Tangent& t, DiffMode mode,
              double h) {
  const SurfaceTuple bx = beta_numeric(x);
  if (mode == DiffMode::Analytic) {
    std::vector<Jet> a, b, c;
    for (int i = 0; i < x.g; ++i) {
      a.push_back(Jet::var(x.as[i], x.as[i] * t.xa[i]));
      b.push_back(Jet::var(x.bs[i], x.bs[i] * t.xb[i]));
    }
    for (int j = 0; j < x.l; ++j)
      c.push_back(Jet::var(x.cs[j], t.xc[j] * x.cs[j] - x.cs[j] * t.xc[j]));
    std::vector<Jet> oa, ob, oc;
    beta_core<Jet>(x.g, x.l, a, b, c, Jet::constant(Mat::Identity(x.n, x.n)),
                   oa, ob, oc);
    std::vector<Mat> va, vb, vc;
    for (const Jet& j : oa) va.push_back(j.d);
    for (const Jet& j : ob) vb.push_back(j.d);
    for (const Jet& j : oc) vc.push_back(j.d);
    return velocities_to_tangent(bx, va, vb, vc);
  }
  // Central finite differences along the retraction curves.
  auto moved = [&](double s) {
    SurfaceTuple y = x;
    for (int i = 0; i < x.g; ++i) {
      y.as[i] = x.as[i] * expm_skew(s * t.xa[i]);
      y.bs[i] = x.bs[i] * expm_skew(s * t.xb[i]);
    }
    for (int j = 0; j < x.l; ++j) {
      const Mat e = expm_skew(s * t.xc[j]);
      y.cs[j] = e * x.cs[j] * e.adjoint();
    }
    return beta_numeric(y);
  };
  const SurfaceTuple yp = moved(h);
  const SurfaceTuple ym = moved(-h);
  std::vector<Mat> va, vb, vc;
  for (int i = 0; i < x.g; ++i) {
    va.push_back((yp.as[i] - ym.as[i]) / (2 * h));
    vb.push_back((yp.bs[i] - ym.bs[i]) / (2 * h));
  }
  for (int j = 0; j < x.l; ++j)
    vc.push_back((yp.cs[j] - ym.cs[j]) / (2 * h));
  return velocities_to_tangent(bx, va, vb, vc);
}

double beta_pullback_residual(const SurfaceTuple& x, const Tangent& t1,
                              const Tangent& t2, DiffMode mode, double h) {
  const SurfaceTuple bx = beta_numeric(x);
  const Tangent s1 = dbeta(x, t1, mode, h);
  const Tangent s2 = dbeta(x, t2, mode, h);
  return std::abs(omega_fused(bx, s1, s2) + omega_fused(x, t1, t2));
}

std::vector<Tangent> tangent_basis(const SurfaceTuple& x) {
  std::vector<Tangent> basis;
  const std::vector<Mat> alg = algebra_basis(x.n, x.group);
  for (int i = 0; i < x.g; ++i) {
    for (const Mat& e : alg) {
      Tangent t = Tangent::zero(x);
      t.xa[i] = e;
      basis.push_back(t);
    }
    for (const Mat& e : alg) {
      Tangent t = Tangent::zero(x);
      t.xb[i] = e;
      basis.push_back(t);
    }
  }
  const Cplx i1(0, 1);
  for (int j = 0; j < x.l; ++j) {
    const UnitaryEig e = eig_unitary(x.cs[j]);
    for (int p = 0; p < x.n; ++p)
      for (int q = p + 1; q < x.n; ++q) {
        if (std::abs(e.d(p) - e.d(q)) <= 1e-8) continue;
        Mat y1 = Mat::Zero(x.n, x.n);
        y1(p, q) = 1;
        y1(q, p) = -1;
        Mat y2 = Mat::Zero(x.n, x.n);
        y2(p, q) = i1;
        y2(q, p) = i1;
        for (const Mat& y : {y1, y2}) {
          Tangent t = Tangent::zero(x);
          t.xc[j] = skew_clean(e.V * y * e.V.adjoint());
          basis.push_back(t);
        }
      }
  }
  return basis;
}

Tangent fundamental_vector_field(const SurfaceTuple& x, const Mat& X) {
  Tangent t;
  for (int i = 0; i < x.g; ++i) {
    t.xa.push_back(skew_clean(x.as[i].adjoint() * X * x.as[i] - X));
    t.xb.push_back(skew_clean(x.bs[i].adjoint() * X * x.bs[i] - X));
  }
  for (int j = 0; j < x.l; ++j) t.xc.push_back(X);
  return t;
}

namespace {

RVec vec_velocities(const SurfaceTuple& x, const Tangent& t) {
  const int n = x.n;
  const int per = 2 * n * n;
  std::vector<Mat> vels;
  for (int i = 0; i < x.g; ++i) {
    vels.push_back(x.as[i] * t.xa[i]);
    vels.push_back(x.bs[i] * t.xb[i]);
  }
  for (int j = 0; j < x.l; ++j)
    vels.push_back(t.xc[j] * x.cs[j] - x.cs[j] * t.xc[j]);
  RVec v(per * static_cast<int>(vels.size()));
  int at = 0;
  for (const Mat& m : vels) {
    for (int col = 0; col < n; ++col)
      for (int row = 0; row < n; ++row) {
        v(at++) = m(row, col).real();
        v(at++) = m(row, col).imag();
      }
  }
  return v;
}

}  // namespace

KernelCheckResult check_axiom_kernel(const SurfaceTuple& x,
                                     const Tolerances& tol) {
  KernelCheckResult out;
  const Mat mu = momentum(x);
  const UnitaryEig e = eig_unitary(mu);
  // Basis of {X : Ad(mu) X = -X}: eigenphase pairs at distance pi.
  std::vector<Mat> kbasis;
  const Cplx i1(0, 1);
  for (int p = 0; p < x.n; ++p)
    for (int q = p + 1; q < x.n; ++q) {
      if (std::abs(e.d(p) + e.d(q)) > 1e-7) continue;
      Mat y1 = Mat::Zero(x.n, x.n);
      y1(p, q) = 1;
      y1(q, p) = -1;
      Mat y2 = Mat::Zero(x.n, x.n);
      y2(p, q) = i1;
      y2(q, p) = i1;
      kbasis.push_back(skew_clean(e.V * y1 * e.V.adjoint()));
      kbasis.push_back(skew_clean(e.V * y2 * e.V.adjoint()));
    }
  if (kbasis.empty()) {
    out.predicted = 0;
  } else {
    RMat stacked(vec_velocities(x, fundamental_vector_field(x, kbasis[0])).size(),
                 static_cast<int>(kbasis.size()));
    for (int k = 0; k < static_cast<int>(kbasis.size()); ++k)
      stacked.col(k) = vec_velocities(x, fundamental_vector_field(x, kbasis[k]));
    Eigen::JacobiSVD<RMat> svd(stacked);
    const RVec sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    for (int k = 0; k < sv.size(); ++k)
      if (sv(k) > tol.rank_gap * std::max(smax, 1e-300)) ++rank;
    out.predicted = smax <= 1e-12 ? 0 : rank;
  }

  const std::vector<Tangent> basis = tangent_basis(x);
  const int dim = static_cast<int>(basis.size());
  RMat gram(dim, dim);
  for (int r = 0; r < dim; ++r) {
    gram(r, r) = 0.0;
    for (int s = r + 1; s < dim; ++s) {
      const double w = omega_fused(x, basis[r], basis[s]);
      gram(r, s) = w;
      gram(s, r) = -w;
    }
  }
  Eigen::JacobiSVD<RMat> svd(gram);
  const RVec sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  int nullity = 0;
  out.gap = 0.0;
  if (smax <= 1e-12) {
    nullity = dim;
  } else {
    for (int k = 0; k < sv.size(); ++k)
      if (sv(k) <= tol.rank_gap * smax) ++nullity;
    if (nullity > 0 && nullity < dim) {
      const double below = sv(dim - nullity);
      const double above = sv(dim - nullity - 1);
      out.gap = below > 0 ? above / below : 1e300;
    }
  }
  out.computed = nullity;
  out.pass = (out.predicted == out.computed);
  return out;
}

double check_axiom_contraction(const SurfaceTuple& x) {
  const Mat mu = momentum(x);
  const Mat mui = mu.adjoint();
  const std::vector<Tangent> basis = tangent_basis(x);
  const std::vector<Mat> alg = algebra_basis(x.n, x.group);
  double worst = 0.0;
  for (const Mat& X : alg) {
    const Tangent xs = fundamental_vector_field(x, X);
    for (const Tangent& t : basis) {
      const double lhs = omega_fused(x, xs, t);
      const Mat v = dmomentum(x, t);
      const double rhs = 0.5 * ip(mui * v + v * mui, X);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

}  // namespace surfrep
