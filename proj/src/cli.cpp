#include "surfrep/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "surfrep/decomp.hpp"
#include "surfrep/io.hpp"
#include "surfrep/kernels.hpp"
#include "surfrep/moduli.hpp"
#include "surfrep/qham.hpp"
#include "surfrep/thompson.hpp"
#include "surfrep/word.hpp"

namespace surfrep {
namespace cli {

const char* kToolVersion = "0.1.0";
const int kSchemaVersion = 1;

namespace {

using io::json;

const std::map<std::string, double Tolerances::*>& tol_keys() {
  static const std::map<std::string, double Tolerances::*> keys = {
      {"unitary", &Tolerances::unitary},
      {"skew", &Tolerances::skew},
      {"special", &Tolerances::special},
      {"class_membership", &Tolerances::class_membership},
      {"algebra", &Tolerances::algebra},
      {"symmetry", &Tolerances::symmetry},
      {"factorization", &Tolerances::factorization},
      {"witness", &Tolerances::witness},
      {"phi_residual", &Tolerances::phi_residual},
      {"momentum_one", &Tolerances::momentum_one},
      {"contraction", &Tolerances::contraction},
      {"rank_gap", &Tolerances::rank_gap},
      {"beta_form_fd", &Tolerances::beta_form_fd},
      {"beta_form_analytic", &Tolerances::beta_form_analytic}};
  return keys;
}

json tolerances_to_json(const Tolerances& t) {
  json j = json::object();
  for (const auto& [k, ptr] : tol_keys()) j[k] = t.*ptr;
  return j;
}

struct Ctx {
  Tolerances tol;
  bool allow_none = false;
  json results = json::object();
  json verdicts = json::array();
  json inputs = json::object();
  int exit_code = 0;

  void verdict(const std::string& name, const std::string& v) {
    verdicts.push_back(json{{"name", name}, {"verdict", v}});
    note(v);
  }
  void verdict(const std::string& name, const std::string& v, double residual,
               double threshold) {
    verdicts.push_back(json{{"name", name},
                            {"verdict", v},
                            {"residual", residual},
                            {"threshold", threshold}});
    note(v);
  }
  void check(const std::string& name, double residual, double threshold) {
    verdict(name, residual <= threshold ? "pass" : "fail", residual,
            threshold);
  }
  void note(const std::string& v) {
    if (v == "pass") return;
    if (v == "none-found") {
      if (!allow_none) exit_code = std::max(exit_code, 1);
      return;
    }
    exit_code = std::max(exit_code, 1);
  }

  json load(const std::string& path) {
    const std::string text = io::read_file(path);
    inputs[path] = io::digest_hex(text);
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw io::ParseError(path + ": invalid JSON");
    return j;
  }
  void emit_file(const std::string& path, const std::string& content) {
    io::write_file(path, content);
    results["output"] = json{{"path", path}, {"digest", io::digest_hex(content)}};
  }
};

double tuple_diff(const SurfaceTuple& x, const SurfaceTuple& y) {
  double r = 0;
  for (int i = 0; i < x.g; ++i) {
    r = std::max(r, fnorm(x.as[i] - y.as[i]));
    r = std::max(r, fnorm(x.bs[i] - y.bs[i]));
  }
  for (int j = 0; j < x.l; ++j) r = std::max(r, fnorm(x.cs[j] - y.cs[j]));
  return r;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Restores the kernels lane override on scope exit.
struct LaneGuard {
  kern::Lane saved = kern::forced_lane();
  ~LaneGuard() { kern::force_lane(saved); }
};

kern::Lane lane_from_name(const std::string& s) {
  if (s == "scalar") return kern::Lane::Scalar;
  if (s == "avx2") return kern::Lane::Avx2;
  return kern::Lane::Auto;
}

struct Args {
  int n = 2, g = 0, l = 1;
  std::string group = "U";
  int samples = 100;
  uint64_t seed = 0;
  int all_upto = 0;
  double identity_tol = 1e-11;
  std::string which, mode = "analytic", source = "full", lane = "auto";
  std::string input, classes, spectra, solution, out_path;
  double check_tol = 0;  // 0 = use the table default for the command
  bool beta_fixed = false;
  int restarts = 16, max_iters = 4000;
  double cert_tol = 1e-7;
};

std::vector<ClassSpec> specs_from_file(Ctx& c, const std::string& path) {
  json j = c.load(path);
  const json* arr = &j;
  std::string where = path;
  if (j.is_object() && j.contains("specs")) {
    arr = &j["specs"];
    where = path + ".specs";
  }
  if (!arr->is_array())
    throw io::ParseError(where + ": expected an array of class specs");
  std::vector<ClassSpec> specs;
  for (std::size_t k = 0; k < arr->size(); ++k)
    specs.push_back(io::spec_from_json(
        (*arr)[k], where + "[" + std::to_string(k) + "]", c.tol));
  return specs;
}

// ---- verify symbolic ----------------------------------------------------

void cmd_verify_symbolic(Ctx& c, const Args& a) {
  std::vector<std::pair<int, int>> sigs;
  if (a.all_upto > 0) {
    for (int g = 0; g <= a.all_upto; ++g)
      for (int l = 0; l <= a.all_upto; ++l)
        if (g + l >= 1) sigs.emplace_back(g, l);
  } else {
    if (a.g < 0 || a.l < 0 || a.g + a.l < 1)
      throw io::ParseError("verify symbolic: need --g/--l with g+l >= 1");
    sigs.emplace_back(a.g, a.l);
  }
  json out = json::array();
  for (auto [g, l] : sigs) {
    const std::string tag =
        "g=" + std::to_string(g) + " l=" + std::to_string(l);
    const word::WordTuple bt = word::beta_symbolic(g, l);
    json slots = json::array();
    for (const word::Word& w : bt.slots) slots.push_back(word::to_string(w));
    auto one = [&](const char* name, const word::SymbolicCheck& r) {
      const std::string v = r.holds_freely
                                ? "pass"
                                : (r.relation_dependent ? "indeterminate"
                                                        : "fail");
      c.verdict("symbolic " + tag + " " + name, v);
      return json{{"verdict", v}, {"detail", r.detail}};
    };
    json ids = json::object();
    ids["involution"] = one("involution", word::check_involution_symbolic(g, l));
    ids["equivariance"] =
        one("equivariance", word::check_equivariance_symbolic(g, l));
    ids["momentum"] = one("momentum", word::check_momentum_compat_symbolic(g, l));
    out.push_back(json{
        {"g", g}, {"l", l}, {"beta_slots", slots}, {"identities", ids}});
  }
  c.results["signatures"] = out;
}

// ---- verify numeric -----------------------------------------------------

void cmd_verify_numeric(Ctx& c, const Args& a) {
  const Group grp = io::group_from_name(a.group, "--group");
  Rng rng(a.seed);
  double r_invol = 0, r_equiv = 0, r_mom = 0, r_class = 0;
  for (int s = 0; s < a.samples; ++s) {
    const SurfaceTuple x = random_tuple(a.n, grp, a.g, a.l, rng);
    const SurfaceTuple bx = beta_numeric(x);
    r_invol = std::max(r_invol, tuple_diff(beta_numeric(bx), x));
    const Mat u = haar_sample(a.n, grp, rng).m();
    r_equiv =
        std::max(r_equiv, tuple_diff(beta_numeric(act(u, x)), act(tau(u), bx)));
    r_mom = std::max(r_mom, fnorm(momentum(bx) - tau_minus(momentum(x))));
    for (int j = 0; j < a.l; ++j)
      r_class = std::max(
          r_class, spec_distance(bx.cs[j], ClassSpec::of(x.cs[j], grp, c.tol)));
  }
  c.results["seed"] = a.seed;
  c.results["samples"] = a.samples;
  c.results["residuals"] = json{{"involution", r_invol},
                                {"equivariance", r_equiv},
                                {"momentum", r_mom},
                                {"class_preservation", r_class}};
  c.check("involution", r_invol, a.identity_tol);
  c.check("equivariance", r_equiv, a.identity_tol);
  c.check("momentum-compatibility", r_mom, a.identity_tol);
  if (a.l > 0) c.check("class-preservation", r_class, c.tol.class_membership);
}

// ---- forms check --------------------------------------------------------

void cmd_forms_check(Ctx& c, const Args& a) {
  const Group grp = io::group_from_name(a.group, "--group");
  Rng rng(a.seed);
  c.results["seed"] = a.seed;
  c.results["samples"] = a.samples;
  if (a.which == "kernel") {
    int mismatches = 0;
    double min_gap = HUGE_VAL;
    for (int s = 0; s < a.samples; ++s) {
      const SurfaceTuple x = random_tuple(a.n, grp, a.g, a.l, rng);
      const KernelCheckResult kr = check_axiom_kernel(x, c.tol);
      if (!kr.pass) ++mismatches;
      if (kr.gap > 0) min_gap = std::min(min_gap, kr.gap);
    }
    c.results["mismatches"] = mismatches;
    if (std::isfinite(min_gap)) c.results["min_rank_gap"] = min_gap;
    c.verdict("kernel-dimension", mismatches == 0 ? "pass" : "fail");
  } else if (a.which == "contraction") {
    double r = 0;
    for (int s = 0; s < a.samples; ++s) {
      const SurfaceTuple x = random_tuple(a.n, grp, a.g, a.l, rng);
      r = std::max(r, check_axiom_contraction(x));
    }
    c.results["residual"] = r;
    c.check("contraction", r, c.tol.contraction);
  } else {  // beta-reversal
    const DiffMode mode =
        a.mode == "fd" ? DiffMode::FiniteDifference : DiffMode::Analytic;
    const double thr =
        a.mode == "fd" ? c.tol.beta_form_fd : c.tol.beta_form_analytic;
    double r = 0;
    for (int s = 0; s < a.samples; ++s) {
      const SurfaceTuple x = random_tuple(a.n, grp, a.g, a.l, rng);
      const Tangent t1 = random_tangent(x, rng);
      const Tangent t2 = random_tangent(x, rng);
      r = std::max(r, beta_pullback_residual(x, t1, t2, mode));
    }
    c.results["mode"] = a.mode;
    c.results["residual"] = r;
    c.check("beta-reversal", r, thr);
  }
}

// ---- decompose ----------------------------------------------------------

void cmd_decompose(Ctx& c, const Args& a) {
  const SurfaceTuple x = io::tuple_from_json(c.load(a.input), a.input, c.tol);
  const double thr = a.check_tol > 0 ? a.check_tol : c.tol.phi_residual;
  const double mures =
      fnorm(momentum(x) - Mat::Identity(x.n, x.n));
  c.results["momentum_residual"] = mures;
  if (mures > c.tol.momentum_one) {
    c.results["detail"] = "tuple is not on the momentum fiber";
    c.verdict("decomposable", "fail", mures, c.tol.momentum_one);
    return;
  }
  const std::optional<PhiResult> r = solve_phi(x, c.tol);
  if (!r) {
    c.verdict("decomposable", "none-found");
    return;
  }
  c.results["phi"] = io::matrix_to_json(r->phi, x.group);
  c.results["phi_residual"] = r->residual;
  c.results["generic"] = r->generic;
  const Witness w = witness_from_phi(x, r->phi);
  const WitnessReport rep = check_witness(x, w, thr, c.tol);
  c.results["witness"] = io::witness_to_json(w, x.group);
  c.results["witness_report"] =
      json{{"symmetry", rep.res_symmetry},
           {"chain", rep.res_chain},
           {"pairing", rep.res_pairing},
           {"characterization", rep.res_characterization},
           {"detail", rep.detail}};
  const double worst =
      std::max({rep.res_symmetry, rep.res_chain, rep.res_pairing,
                rep.res_characterization, r->residual});
  c.verdict("decomposable", rep.ok && r->residual <= thr ? "pass" : "fail",
            worst, thr);
}

// ---- sample decomposable ------------------------------------------------

void cmd_sample_decomposable(Ctx& c, const Args& a) {
  c.results["seed"] = a.seed;
  SurfaceTuple x;
  Witness wit;
  if (a.classes.empty()) {
    const Group grp = io::group_from_name(a.group, "--group");
    Rng rng(a.seed);
    DecompSample s = sample_decomposable(a.n, grp, a.g, a.l, rng);
    x = std::move(s.x);
    wit = std::move(s.wit);
  } else {
    const std::vector<ClassSpec> specs = specs_from_file(c, a.classes);
    if (specs.empty())
      throw io::ParseError(a.classes + ": need at least one class spec");
    FinderConfig cfg;
    cfg.seed = a.seed;
    cfg.restarts = a.restarts;
    cfg.max_iters = a.max_iters;
    const FinderResult fr = find_beta_fixed_representation(
        specs[0].n, specs[0].group, a.g, specs, cfg);
    c.results["objective"] = fr.objective;
    c.results["restarts_used"] = fr.restarts_used;
    if (!fr.found) {
      c.verdict("decomposable-sample", "none-found");
      return;
    }
    x = fr.x;
    // A beta-fixed tuple is decomposable with intertwiner 1; the chain is
    // the suffix products themselves.
    wit = witness_from_phi(x, Mat::Identity(x.n, x.n));
    double clsres = 0;
    for (int j = 0; j < x.l; ++j)
      clsres = std::max(clsres, spec_distance(x.cs[j], specs[j]));
    c.results["class_residual"] = clsres;
    c.check("classes", clsres, c.tol.class_membership);
  }
  const double thr = a.check_tol > 0 ? a.check_tol : c.tol.witness;
  const WitnessReport rep = check_witness(x, wit, thr, c.tol);
  json payload{{"tuple", io::tuple_to_json(x)},
               {"witness", io::witness_to_json(wit, x.group)}};
  if (!a.out_path.empty())
    c.emit_file(a.out_path, payload.dump(2) + "\n");
  else
    c.results["sample"] = payload;
  const double worst = std::max({rep.res_symmetry, rep.res_chain,
                                 rep.res_pairing, rep.res_characterization});
  c.verdict("witness", rep.ok ? "pass" : "fail", worst, thr);
}

// ---- find ---------------------------------------------------------------

void cmd_find(Ctx& c, const Args& a) {
  const std::vector<ClassSpec> specs = specs_from_file(c, a.classes);
  int n = a.n;
  Group grp = io::group_from_name(a.group, "--group");
  if (!specs.empty()) {
    n = specs[0].n;
    grp = specs[0].group;
  } else if (a.g < 1) {
    throw io::ParseError(a.classes +
                         ": no class specs and no handles; nothing to find");
  }
  FinderConfig cfg;
  cfg.seed = a.seed;
  cfg.restarts = a.restarts;
  cfg.max_iters = a.max_iters;
  const FinderResult fr =
      a.beta_fixed ? find_beta_fixed_representation(n, grp, a.g, specs, cfg)
                   : find_representation(n, grp, a.g, specs, cfg);
  c.results["seed"] = a.seed;
  c.results["objective"] = fr.objective;
  c.results["iters"] = fr.iters;
  c.results["restarts_used"] = fr.restarts_used;
  if (!fr.found) {
    c.verdict("representation", "none-found");
    return;
  }
  const double mures =
      fnorm(momentum(fr.x) - Mat::Identity(fr.x.n, fr.x.n));
  double clsres = 0;
  for (int j = 0; j < fr.x.l; ++j)
    clsres = std::max(clsres, spec_distance(fr.x.cs[j], specs[j]));
  c.results["momentum_residual"] = mures;
  c.results["class_residual"] = clsres;
  bool ok = mures <= c.tol.momentum_one && clsres <= c.tol.class_membership;
  if (a.beta_fixed) {
    const double betares = tuple_diff(beta_numeric(fr.x), fr.x);
    c.results["beta_residual"] = betares;
    ok = ok && betares <= c.tol.class_membership;
  }
  if (!a.out_path.empty())
    c.emit_file(a.out_path, io::tuple_to_json(fr.x).dump(2) + "\n");
  else
    c.results["tuple"] = io::tuple_to_json(fr.x);
  c.verdict("representation", ok ? "pass" : "fail",
            std::max(mures, clsres), c.tol.class_membership);
}

// ---- analyze isotropy ---------------------------------------------------

void cmd_analyze_isotropy(Ctx& c, const Args& a) {
  const SurfaceTuple x = io::tuple_from_json(c.load(a.input), a.input, c.tol);
  const IsotropyReport r = isotropy_report(x, c.tol);
  c.results["dim"] = r.dim;
  c.results["gap"] = r.gap;
  c.results["irreducible"] = r.irreducible;
  c.verdict("analysis", "pass");
}

// ---- polytope sample ----------------------------------------------------

double su2_angle_from_spec(const ClassSpec& s, const std::string& where) {
  if (s.n != 2)
    throw io::ParseError(where + ": polytope sampling needs 2x2 classes");
  const double p = s.phases(0);
  return std::min(p, 2 * M_PI - p);
}

void cmd_polytope_sample(Ctx& c, const Args& a) {
  const std::vector<ClassSpec> specs = specs_from_file(c, a.classes);
  if (specs.size() < 2)
    throw io::ParseError(a.classes + ": need at least two class specs");
  std::vector<double> angles;
  for (std::size_t k = 0; k < specs.size(); ++k)
    angles.push_back(su2_angle_from_spec(
        specs[k], a.classes + "[" + std::to_string(k) + "]"));

  LaneGuard guard;
  kern::force_lane(lane_from_name(a.lane));
  const PolytopeCloud cloud =
      polytope_sample_su2(angles, a.samples, a.source == "beta", a.seed);

  std::ostringstream csv;
  csv << "# product-angle cloud, group=su2, source=" << a.source
      << ", samples=" << a.samples << ", seed=" << a.seed
      << ", lane=" << cloud.lane << "\n# classes=";
  for (std::size_t k = 0; k < angles.size(); ++k)
    csv << (k ? "," : "") << num(angles[k]);
  csv << "\nangle\n";
  for (double t : cloud.angles) csv << num(t) << "\n";
  c.emit_file(a.out_path, csv.str());

  const Interval exact = su2_interval_exact(angles);
  c.results["seed"] = a.seed;
  c.results["samples"] = a.samples;
  c.results["source"] = a.source;
  c.results["lane"] = cloud.lane;
  c.results["hull"] = json{{"lo", cloud.lo}, {"hi", cloud.hi}};
  c.results["attainable"] = json{{"lo", exact.lo}, {"hi", exact.hi}};
  const double overshoot =
      std::max({0.0, exact.lo - cloud.lo, cloud.hi - exact.hi});
  c.check("cloud-in-attainable-interval", overshoot, 1e-9);
}

// ---- thompson -----------------------------------------------------------

void certify_thompson(Ctx& c, const ThompsonInstance& inst,
                      const std::vector<Mat>& As, double cert_tol) {
  const std::vector<ClassSpec> specs = inst.specs(c.tol);
  double udef = 0;
  for (const Mat& m : As) udef = std::max(udef, unitary_defect(m));
  Mat prod = Mat::Identity(inst.n, inst.n);
  for (const Mat& m : As) prod = prod * m;
  const double pres = fnorm(prod - Mat::Identity(inst.n, inst.n));
  double sres = 0;
  for (std::size_t j = 0; j < As.size(); ++j)
    sres = std::max(sres,
                    spec_distance(As[j].transpose() * As[j], specs[j]));
  c.results["certificates"] = json{{"unitarity", udef},
                                   {"product_residual", pres},
                                   {"spec_residual", sres}};
  c.check("unitarity", udef, c.tol.unitary);
  c.check("product", pres, cert_tol);
  c.check("spectra", sres, cert_tol);
}

void cmd_thompson_solve(Ctx& c, const Args& a) {
  const ThompsonInstance inst =
      io::thompson_instance_from_json(c.load(a.spectra), a.spectra);
  FinderConfig cfg;
  cfg.seed = a.seed;
  cfg.restarts = a.restarts;
  cfg.max_iters = a.max_iters;
  c.results["seed"] = a.seed;
  const std::optional<ThompsonSolution> sol = solve_thompson(inst, cfg, c.tol);
  if (!sol) {
    c.verdict("factorization", "none-found");
    return;
  }
  json payload{{"instance", io::thompson_instance_to_json(inst)},
               {"As", io::matrices_to_json(sol->As, Group::U)["matrices"]},
               {"ws", io::matrices_to_json(sol->ws, Group::U)["matrices"]}};
  payload["certificates"] =
      json{{"spec_residual", sol->cert.spec_residual},
           {"product_residual", sol->cert.product_residual}};
  if (!a.out_path.empty())
    c.emit_file(a.out_path, payload.dump(2) + "\n");
  else
    c.results["solution"] = payload;
  certify_thompson(c, inst, sol->As, a.cert_tol);
}

void cmd_thompson_check(Ctx& c, const Args& a) {
  const json j = c.load(a.solution);
  if (!j.is_object() || !j.contains("instance") || !j.contains("As"))
    throw io::ParseError(a.solution + ": expected {instance, As, ...}");
  const ThompsonInstance inst =
      io::thompson_instance_from_json(j["instance"], a.solution + ".instance");
  Group grp = Group::U;
  const std::vector<Mat> As =
      io::matrices_from_json(j["As"], grp, a.solution + ".As");
  if (static_cast<int>(As.size()) != static_cast<int>(inst.lambdas.size()))
    throw io::ParseError(a.solution + ": factor count disagrees with spectra");
  certify_thompson(c, inst, As, a.cert_tol);
}

void cmd_thompson_forward(Ctx& c, const Args& a) {
  Group grp = Group::U;
  const std::vector<Mat> As =
      io::matrices_from_json(c.load(a.input), grp, a.input);
  const std::vector<Mat> ws = thompson_forward(As, c.tol);
  const int n = static_cast<int>(As[0].rows());
  double symres = 0;
  Mat suffix = Mat::Identity(n, n);
  for (int j = static_cast<int>(ws.size()) - 1; j >= 0; --j) {
    suffix = (ws[j] * suffix).eval();
    symres = std::max(symres, sym_defect(suffix));
  }
  const double pres = fnorm(suffix - Mat::Identity(n, n));
  double sres = 0;
  for (std::size_t j = 0; j < ws.size(); ++j)
    sres = std::max(
        sres, spec_distance(ws[j], ClassSpec::of(As[j].transpose() * As[j],
                                                 Group::U, c.tol)));
  if (!a.out_path.empty())
    c.emit_file(a.out_path, io::matrices_to_json(ws, grp).dump(2) + "\n");
  else
    c.results["classes"] = io::matrices_to_json(ws, grp)["matrices"];
  c.results["residuals"] = json{{"suffix_symmetry", symres},
                                {"product", pres},
                                {"spectra", sres}};
  c.check("involution-fixed", symres, c.tol.factorization);
  c.check("product", pres, c.tol.factorization);
  c.check("spectra", sres, c.tol.class_membership);
}

void apply_config_file(Ctx& c, const std::string& path) {
  const json j = io::parse_file(path);
  if (!j.is_object()) throw io::ParseError(path + ": expected an object");
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object())
      throw io::ParseError(path + ".tolerances: expected an object");
    for (const auto& [k, v] : t.items()) {
      auto it = tol_keys().find(k);
      if (it == tol_keys().end())
        throw io::ParseError(path + ".tolerances: unknown key '" + k + "'");
      if (!v.is_number())
        throw io::ParseError(path + ".tolerances." + k + ": expected a number");
      c.tol.*(it->second) = v.get<double>();
    }
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"surface-group representation toolkit"};
  app.set_version_flag("--version",
                       std::string("surfrep ") + kToolVersion + " (schema " +
                           std::to_string(kSchemaVersion) + ")");
  app.require_subcommand(1);

  Args a;
  std::string handler;
  std::vector<std::string> tol_overrides;
  std::string config_path;
  bool allow_none = false;

  app.add_flag("--allow-none", allow_none,
               "exit 0 when a search legitimately finds nothing");
  app.add_option("--tol-set", tol_overrides,
                 "override a tolerance table entry, key=value");
  app.add_option("--config", config_path,
                 "config file (default: $SURFREP_CONFIG)");

  auto pick = [&](CLI::App* sub, const char* id) {
    sub->callback([&handler, id] { handler = id; });
  };

  CLI::App* verify = app.add_subcommand("verify", "identity suites");
  verify->require_subcommand(1);
  CLI::App* vs = verify->add_subcommand(
      "symbolic", "free-group proofs of the involution identities");
  vs->add_option("--g", a.g, "handles");
  vs->add_option("--l", a.l, "punctures");
  vs->add_option("--all-upto", a.all_upto, "run every signature up to N");
  pick(vs, "verify.symbolic");

  CLI::App* vn = verify->add_subcommand(
      "numeric", "sampled involution identities on random tuples");
  vn->add_option("--n", a.n, "matrix size")->required();
  vn->add_option("--g", a.g, "handles")->required();
  vn->add_option("--l", a.l, "punctures")->required();
  vn->add_option("--group", a.group)->check(CLI::IsMember({"U", "SU"}));
  vn->add_option("--samples", a.samples, "sample count");
  vn->add_option("--seed", a.seed)->required();
  vn->add_option("--tol", a.identity_tol, "identity residual threshold");
  pick(vn, "verify.numeric");

  CLI::App* forms = app.add_subcommand("forms", "2-form checks");
  forms->require_subcommand(1);
  CLI::App* fc = forms->add_subcommand("check", "axiom and pullback checks");
  fc->add_option("--which", a.which)
      ->required()
      ->check(CLI::IsMember({"kernel", "contraction", "beta-reversal"}));
  fc->add_option("--n", a.n)->required();
  fc->add_option("--g", a.g)->required();
  fc->add_option("--l", a.l)->required();
  fc->add_option("--group", a.group)->check(CLI::IsMember({"U", "SU"}));
  fc->add_option("--samples", a.samples);
  fc->add_option("--seed", a.seed)->required();
  fc->add_option("--mode", a.mode)->check(CLI::IsMember({"fd", "analytic"}));
  pick(fc, "forms.check");

  CLI::App* dec = app.add_subcommand("decompose",
                                     "solve beta(x) = phi . x and certify");
  dec->add_option("--input", a.input, "tuple JSON")->required();
  dec->add_option("--tol", a.check_tol, "witness residual threshold");
  pick(dec, "decompose");

  CLI::App* sample = app.add_subcommand("sample", "synthesize examples");
  sample->require_subcommand(1);
  CLI::App* sd = sample->add_subcommand("decomposable",
                                        "exact decomposable tuple + witness");
  sd->add_option("--n", a.n);
  sd->add_option("--g", a.g)->required();
  sd->add_option("--l", a.l)->required();
  sd->add_option("--group", a.group)->check(CLI::IsMember({"U", "SU"}));
  sd->add_option("--classes", a.classes, "class spec JSON (constrained mode)");
  sd->add_option("--seed", a.seed)->required();
  sd->add_option("--restarts", a.restarts);
  sd->add_option("--max-iters", a.max_iters);
  sd->add_option("-o,--out", a.out_path, "write the sample here");
  pick(sd, "sample.decomposable");

  CLI::App* find = app.add_subcommand("find", "search the relation variety");
  find->add_option("--classes", a.classes, "class spec JSON")->required();
  find->add_option("--g", a.g)->required();
  find->add_option("--n", a.n, "matrix size (when no specs given)");
  find->add_option("--group", a.group)->check(CLI::IsMember({"U", "SU"}));
  find->add_flag("--beta-fixed", a.beta_fixed, "search Fix(beta) instead");
  find->add_option("--seed", a.seed)->required();
  find->add_option("--restarts", a.restarts);
  find->add_option("--max-iters", a.max_iters);
  find->add_option("-o,--out", a.out_path, "write the tuple here");
  pick(find, "find");

  CLI::App* analyze = app.add_subcommand("analyze", "pointwise reports");
  analyze->require_subcommand(1);
  CLI::App* ai = analyze->add_subcommand("isotropy",
                                         "isotropy algebra dimension");
  ai->add_option("--input", a.input, "tuple JSON")->required();
  pick(ai, "analyze.isotropy");

  CLI::App* poly = app.add_subcommand("polytope", "momentum image sampling");
  poly->require_subcommand(1);
  CLI::App* ps = poly->add_subcommand("sample", "alcove angle cloud (SU(2))");
  ps->add_option("--group", a.group)
      ->required()
      ->check(CLI::IsMember({"su2"}));
  ps->add_option("--classes", a.classes, "class spec JSON")->required();
  ps->add_option("--samples", a.samples);
  ps->add_option("--source", a.source)
      ->check(CLI::IsMember({"full", "beta"}));
  ps->add_option("--seed", a.seed)->required();
  ps->add_option("--lane", a.lane)
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
  ps->add_option("-o,--out", a.out_path, "CSV output path")->required();
  pick(ps, "polytope.sample");

  CLI::App* th = app.add_subcommand("thompson", "multiplicative spectra");
  th->require_subcommand(1);
  CLI::App* ts = th->add_subcommand("solve", "factor 1 with given spectra");
  ts->add_option("--spectra", a.spectra, "instance JSON")->required();
  ts->add_option("--seed", a.seed)->required();
  ts->add_option("--restarts", a.restarts);
  ts->add_option("--max-iters", a.max_iters);
  ts->add_option("--cert-tol", a.cert_tol);
  ts->add_option("-o,--out", a.out_path, "write the solution here");
  pick(ts, "thompson.solve");

  CLI::App* tc = th->add_subcommand("check", "re-certify a solution file");
  tc->add_option("--solution", a.solution, "solution JSON")->required();
  tc->add_option("--cert-tol", a.cert_tol);
  pick(tc, "thompson.check");

  CLI::App* tf = th->add_subcommand("forward",
                                    "class tuple from a unit factorization");
  tf->add_option("--input", a.input, "matrix list JSON")->required();
  tf->add_option("-o,--out", a.out_path, "write the classes here");
  pick(tf, "thompson.forward");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("surfrep");
  for (const std::string& s : args) argv_store.push_back(s);
  std::vector<const char*> argv;
  for (const std::string& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  Ctx c;
  c.allow_none = allow_none;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (config_path.empty())
      if (const char* env = std::getenv("SURFREP_CONFIG")) config_path = env;
    if (!config_path.empty()) apply_config_file(c, config_path);
    for (const std::string& kv : tol_overrides) {
      const auto eq = kv.find('=');
      auto it = eq == std::string::npos ? tol_keys().end()
                                        : tol_keys().find(kv.substr(0, eq));
      if (it == tol_keys().end())
        throw io::ParseError("--tol-set: expected key=value with a known key, got '" +
                             kv + "'");
      c.tol.*(it->second) = std::strtod(kv.c_str() + eq + 1, nullptr);
    }

    if (handler == "verify.symbolic") cmd_verify_symbolic(c, a);
    else if (handler == "verify.numeric") cmd_verify_numeric(c, a);
    else if (handler == "forms.check") cmd_forms_check(c, a);
    else if (handler == "decompose") cmd_decompose(c, a);
    else if (handler == "sample.decomposable") cmd_sample_decomposable(c, a);
    else if (handler == "find") cmd_find(c, a);
    else if (handler == "analyze.isotropy") cmd_analyze_isotropy(c, a);
    else if (handler == "polytope.sample") cmd_polytope_sample(c, a);
    else if (handler == "thompson.solve") cmd_thompson_solve(c, a);
    else if (handler == "thompson.check") cmd_thompson_check(c, a);
    else if (handler == "thompson.forward") cmd_thompson_forward(c, a);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const auto t1 = std::chrono::steady_clock::now();

  std::string cmdline;
  for (const std::string& s : args) {
    if (!cmdline.empty()) cmdline += ' ';
    cmdline += s;
  }
  json report{
      {"command", cmdline},
      {"version", json{{"tool", kToolVersion}, {"schema", kSchemaVersion}}},
      {"config", json{{"tolerances", tolerances_to_json(c.tol)},
                      {"allow_none", c.allow_none}}},
      {"inputs", c.inputs},
      {"results", c.results},
      {"verdicts", c.verdicts},
      {"timing_ms",
       std::chrono::duration<double, std::milli>(t1 - t0).count()}};
  out << report.dump(2) << "\n";
  return c.exit_code;
}

}  // namespace cli
}  // namespace surfrep
