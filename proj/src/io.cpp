#include "surfrep/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace surfrep {
namespace io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

int int_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number_integer())
    fail(where + "." + key, "expected an integer");
  return v.get<int>();
}

RMat real_rows(const json& v, int n, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != n)
    fail(where, "expected " + std::to_string(n) + " rows");
  RMat m(n, n);
  for (int r = 0; r < n; ++r) {
    const json& row = v[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      fail(where + "[" + std::to_string(r) + "]",
           "expected " + std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c) {
      if (!row[c].is_number())
        fail(where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]",
             "expected a number");
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

json real_rows_to_json(const RMat& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

RVec real_vec(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array");
  RVec out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number())
      fail(where + "[" + std::to_string(k) + "]", "expected a number");
    out(static_cast<int>(k)) = v[k].get<double>();
  }
  return out;
}

json real_vec_to_json(const RVec& v) {
  json out = json::array();
  for (int k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

}  // namespace

Group group_from_name(const std::string& s, const std::string& where) {
  if (s == "U") return Group::U;
  if (s == "SU") return Group::SU;
  fail(where, "group must be \"U\" or \"SU\", got \"" + s + "\"");
}

json matrix_to_json(const Mat& m, Group g) {
  return json{{"n", static_cast<int>(m.rows())},
              {"group", group_name(g)},
              {"re", real_rows_to_json(m.real())},
              {"im", real_rows_to_json(m.imag())}};
}

Mat matrix_from_json(const json& j, Group& g, const std::string& where) {
  const int n = int_field(j, "n", where);
  if (n < 1) fail(where + ".n", "expected n >= 1");
  const json& gv = field(j, "group", where);
  if (!gv.is_string()) fail(where + ".group", "expected a string");
  g = group_from_name(gv.get<std::string>(), where + ".group");
  const RMat re = real_rows(field(j, "re", where), n, where + ".re");
  const RMat im = real_rows(field(j, "im", where), n, where + ".im");
  return re.cast<Cplx>() + Cplx(0, 1) * im.cast<Cplx>();
}

json spec_to_json(const ClassSpec& s) {
  return json{{"n", s.n},
              {"group", group_name(s.group)},
              {"phases", real_vec_to_json(s.phases)}};
}

ClassSpec spec_from_json(const json& j, const std::string& where,
                         const Tolerances& tol) {
  const int n = int_field(j, "n", where);
  const json& gv = field(j, "group", where);
  if (!gv.is_string()) fail(where + ".group", "expected a string");
  const Group g = group_from_name(gv.get<std::string>(), where + ".group");
  const RVec phases = real_vec(field(j, "phases", where), where + ".phases");
  if (phases.size() != n)
    fail(where + ".phases",
         "expected " + std::to_string(n) + " phases, got " +
             std::to_string(phases.size()));
  try {
    return ClassSpec(n, g, phases, tol);
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

json tuple_to_json(const SurfaceTuple& x) {
  json pairs = json::array();
  for (int i = 0; i < x.g; ++i)
    pairs.push_back(json::array({matrix_to_json(x.as[i], x.group),
                                 matrix_to_json(x.bs[i], x.group)}));
  json classes = json::array();
  for (int j = 0; j < x.l; ++j)
    classes.push_back(matrix_to_json(x.cs[j], x.group));
  json specs = json::array();
  for (const ClassSpec& s : x.specs) specs.push_back(spec_to_json(s));
  return json{{"n", x.n},          {"group", group_name(x.group)},
              {"g", x.g},          {"l", x.l},
              {"pairs", pairs},    {"classes", classes},
              {"specs", specs}};
}

SurfaceTuple tuple_from_json(const json& j, const std::string& where,
                             const Tolerances& tol) {
  const int g = int_field(j, "g", where);
  const int l = int_field(j, "l", where);
  if (g < 0 || l < 0 || g + l < 1)
    fail(where, "signature needs g, l >= 0 and g + l >= 1");
  const json& pairs = field(j, "pairs", where);
  if (!pairs.is_array() || static_cast<int>(pairs.size()) != g)
    fail(where + ".pairs", "expected " + std::to_string(g) + " pairs");
  const json& classes = field(j, "classes", where);
  if (!classes.is_array() || static_cast<int>(classes.size()) != l)
    fail(where + ".classes", "expected " + std::to_string(l) + " matrices");

  std::vector<Mat> as, bs, cs;
  Group grp = Group::U;
  Group slot_grp = Group::U;
  int n = 0;
  auto take = [&](const json& mj, const std::string& w) {
    const Mat m = matrix_from_json(mj, slot_grp, w);
    if (n == 0) {
      n = static_cast<int>(m.rows());
      grp = slot_grp;
    } else if (static_cast<int>(m.rows()) != n) {
      fail(w, "matrix size disagrees with the first slot");
    } else if (slot_grp != grp) {
      fail(w, "group tag disagrees with the first slot");
    }
    return m;
  };
  for (int i = 0; i < g; ++i) {
    const std::string w = where + ".pairs[" + std::to_string(i) + "]";
    const json& p = pairs[i];
    if (!p.is_array() || p.size() != 2) fail(w, "expected [A, B]");
    as.push_back(take(p[0], w + "[0]"));
    bs.push_back(take(p[1], w + "[1]"));
  }
  for (int k = 0; k < l; ++k)
    cs.push_back(take(classes[k],
                      where + ".classes[" + std::to_string(k) + "]"));

  std::vector<ClassSpec> specs;
  const json& sv = field(j, "specs", where);
  if (!sv.is_array()) fail(where + ".specs", "expected an array");
  if (!sv.empty() && static_cast<int>(sv.size()) != l)
    fail(where + ".specs",
         "expected 0 or " + std::to_string(l) + " entries");
  for (std::size_t k = 0; k < sv.size(); ++k)
    specs.push_back(
        spec_from_json(sv[k], where + ".specs[" + std::to_string(k) + "]",
                       tol));
  if (specs.empty() && l > 0)
    for (const Mat& c : cs) specs.push_back(ClassSpec::of(c, grp, tol));

  try {
    return SurfaceTuple::checked(n, grp, std::move(as), std::move(bs),
                                 std::move(cs), std::move(specs), tol);
  } catch (const std::exception& e) {
    fail(where, e.what());
  }
}

json witness_to_json(const Witness& w, Group g) {
  json vs = json::array(), ws = json::array();
  for (const Mat& v : w.vs) vs.push_back(matrix_to_json(v, g));
  for (const Mat& m : w.ws) ws.push_back(matrix_to_json(m, g));
  return json{{"vs", vs}, {"ws", ws}, {"phi", matrix_to_json(w.phi, g)}};
}

Witness witness_from_json(const json& j, const std::string& where) {
  Witness w;
  Group g = Group::U;
  const json& vs = field(j, "vs", where);
  const json& ws = field(j, "ws", where);
  if (!vs.is_array()) fail(where + ".vs", "expected an array");
  if (!ws.is_array()) fail(where + ".ws", "expected an array");
  for (std::size_t k = 0; k < vs.size(); ++k)
    w.vs.push_back(matrix_from_json(
        vs[k], g, where + ".vs[" + std::to_string(k) + "]"));
  for (std::size_t k = 0; k < ws.size(); ++k)
    w.ws.push_back(matrix_from_json(
        ws[k], g, where + ".ws[" + std::to_string(k) + "]"));
  w.phi = matrix_from_json(field(j, "phi", where), g, where + ".phi");
  return w;
}

json thompson_instance_to_json(const ThompsonInstance& inst) {
  json lambdas = json::array();
  for (const RVec& lam : inst.lambdas) lambdas.push_back(real_vec_to_json(lam));
  return json{{"n", inst.n},
              {"group", group_name(inst.group)},
              {"lambdas", lambdas}};
}

ThompsonInstance thompson_instance_from_json(const json& j,
                                             const std::string& where) {
  ThompsonInstance inst;
  inst.n = int_field(j, "n", where);
  if (inst.n < 1) fail(where + ".n", "expected n >= 1");
  inst.group = Group::U;
  if (j.contains("group")) {
    const json& gv = j["group"];
    if (!gv.is_string()) fail(where + ".group", "expected a string");
    inst.group = group_from_name(gv.get<std::string>(), where + ".group");
  }
  const json& lv = field(j, "lambdas", where);
  if (!lv.is_array() || lv.empty())
    fail(where + ".lambdas", "expected a nonempty array of phase rows");
  for (std::size_t k = 0; k < lv.size(); ++k) {
    const std::string w = where + ".lambdas[" + std::to_string(k) + "]";
    RVec row = real_vec(lv[k], w);
    if (row.size() != inst.n)
      fail(w, "expected " + std::to_string(inst.n) + " phases");
    inst.lambdas.push_back(std::move(row));
  }
  return inst;
}

json thompson_solution_to_json(const ThompsonSolution& sol, Group g) {
  json As = json::array(), ws = json::array();
  for (const Mat& a : sol.As) As.push_back(matrix_to_json(a, g));
  for (const Mat& w : sol.ws) ws.push_back(matrix_to_json(w, g));
  return json{{"As", As},
              {"ws", ws},
              {"certificates",
               json{{"spec_residual", sol.cert.spec_residual},
                    {"product_residual", sol.cert.product_residual}}}};
}

json matrices_to_json(const std::vector<Mat>& ms, Group g) {
  json arr = json::array();
  for (const Mat& m : ms) arr.push_back(matrix_to_json(m, g));
  return json{{"matrices", arr}};
}

std::vector<Mat> matrices_from_json(const json& j, Group& g,
                                    const std::string& where) {
  const json* arr = &j;
  std::string w = where;
  if (j.is_object()) {
    arr = &field(j, "matrices", where);
    w = where + ".matrices";
  }
  if (!arr->is_array() || arr->empty())
    fail(w, "expected a nonempty array of matrices");
  std::vector<Mat> out;
  Group first = Group::U;
  for (std::size_t k = 0; k < arr->size(); ++k) {
    Group gk = Group::U;
    Mat m = matrix_from_json((*arr)[k], gk,
                             w + "[" + std::to_string(k) + "]");
    if (k == 0)
      first = gk;
    else if (gk != first || m.rows() != out[0].rows())
      fail(w + "[" + std::to_string(k) + "]",
           "size or group tag disagrees with the first matrix");
    out.push_back(std::move(m));
  }
  g = first;
  return out;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string digest_hex(std::string_view s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                static_cast<unsigned long long>(fnv1a(s)));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << content;
  if (!out) throw ParseError(path + ": write failed");
}

json parse_file(const std::string& path) {
  const std::string text = read_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError(path + ": invalid JSON");
  return j;
}

}  // namespace io
}  // namespace surfrep
