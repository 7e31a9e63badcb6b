#include "surfrep/thompson.hpp"

#include <string>

#include "surfrep/lie.hpp"

namespace surfrep {

std::vector<ClassSpec> ThompsonInstance::specs(const Tolerances& tol) const {
  if (lambdas.empty())
    throw PreconditionError("thompson instance: no factors");
  std::vector<ClassSpec> out;
  out.reserve(lambdas.size());
  for (const RVec& lam : lambdas) out.emplace_back(n, group, lam, tol);
  return out;
}

std::vector<Mat> thompson_forward(const std::vector<Mat>& As,
                                  const Tolerances& tol) {
  const int l = static_cast<int>(As.size());
  if (l < 1) throw PreconditionError("thompson_forward: no factors");
  const int n = static_cast<int>(As[0].rows());
  for (const Mat& a : As) validate_unitary(a, Group::U, tol, "factor");
  Mat prod = Mat::Identity(n, n);
  for (const Mat& a : As) prod = prod * a;
  const double pres = (prod - Mat::Identity(n, n)).norm();
  if (pres > tol.momentum_one)
    throw PreconditionError("thompson_forward: product defect " +
                            std::to_string(pres));
  std::vector<Mat> ws(l);
  Mat suffix_t = Mat::Identity(n, n);  // (A_{j+1}...A_l)^T = A_l^T ... A_{j+1}^T
  for (int j = l - 1; j >= 0; --j) {
    ws[j] = suffix_t * (As[j].transpose() * As[j]) * suffix_t.adjoint();
    suffix_t = suffix_t * As[j].transpose();
  }
  return ws;
}

std::vector<Mat> thompson_backward(const std::vector<Mat>& ws,
                                   const Tolerances& tol) {
  const int l = static_cast<int>(ws.size());
  if (l < 1) throw PreconditionError("thompson_backward: no factors");
  const int n = static_cast<int>(ws[0].rows());
  for (const Mat& w : ws) validate_unitary(w, Group::U, tol, "class element");

  // Involution-fixedness: all suffix products symmetric; the full product
  // (first suffix) must also be 1.
  Mat suffix = Mat::Identity(n, n);
  for (int j = l - 1; j >= 0; --j) {
    suffix = (ws[j] * suffix).eval();
    const double d = sym_defect(suffix);
    if (d > std::max(tol.symmetry, 1e-8) * std::max(1.0, suffix.norm()))
      throw PreconditionError(
          "thompson_backward: suffix product " + std::to_string(j + 1) +
          " not symmetric, defect " + std::to_string(d));
  }
  const double mres = (suffix - Mat::Identity(n, n)).norm();
  if (mres > tol.momentum_one)
    throw PreconditionError("thompson_backward: product defect " +
                            std::to_string(mres));

  std::vector<Mat> As(l);
  if (l == 1) {
    As[0] = takagi_sqrt(ws[0], tol);
    return As;
  }
  As[l - 1] = takagi_sqrt(ws[l - 1], tol);
  Mat P = As[l - 1];  // A_{j+1} ... A_l
  for (int j = l - 2; j >= 1; --j) {
    const Mat m = P.conjugate() * ws[j] * P.transpose();
    As[j] = takagi_sqrt(m, tol);
    P = As[j] * P;
  }
  As[0] = P.adjoint();
  return As;
}

std::optional<ThompsonSolution> solve_thompson(const ThompsonInstance& inst,
                                               const FinderConfig& cfg,
                                               const Tolerances& tol) {
  const std::vector<ClassSpec> specs = inst.specs(tol);
  const FinderResult res =
      find_beta_fixed_representation(inst.n, inst.group, 0, specs, cfg);
  if (!res.found) return std::nullopt;

  ThompsonSolution sol;
  sol.ws = res.x.cs;
  sol.As = thompson_backward(sol.ws, tol);
  const int n = inst.n;
  Mat prod = Mat::Identity(n, n);
  for (const Mat& a : sol.As) prod = prod * a;
  sol.cert.product_residual = (prod - Mat::Identity(n, n)).norm();
  for (int j = 0; j < static_cast<int>(sol.As.size()); ++j)
    sol.cert.spec_residual =
        std::max(sol.cert.spec_residual,
                 spec_distance(sol.As[j].transpose() * sol.As[j], specs[j]));
  return sol;
}

}  // namespace surfrep
