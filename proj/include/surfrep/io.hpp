#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "surfrep/decomp.hpp"
#include "surfrep/qham.hpp"
#include "surfrep/thompson.hpp"
#include "surfrep/types.hpp"

namespace surfrep {
namespace io {

using json = nlohmann::json;

// Schema violations carry the JSON path of the offending field.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrix schema: {"n": int, "group": "U"|"SU", "re": [[...]], "im": [[...]]},
// row-major.
json matrix_to_json(const Mat& m, Group g);
Mat matrix_from_json(const json& j, Group& g, const std::string& where);

// ClassSpec schema: {"n": int, "group": "U"|"SU", "phases": [...]} (radians).
json spec_to_json(const ClassSpec& s);
ClassSpec spec_from_json(const json& j, const std::string& where,
                         const Tolerances& tol = {});

// SurfaceTuple schema: {"g", "l", "pairs": [[A,B],...], "classes": [C,...],
// "specs": [...]}. n and group come from the slot matrices; emitted copies
// carry them at top level too.
json tuple_to_json(const SurfaceTuple& x);
SurfaceTuple tuple_from_json(const json& j, const std::string& where,
                             const Tolerances& tol = {});

json witness_to_json(const Witness& w, Group g);
Witness witness_from_json(const json& j, const std::string& where);

// Thompson instance schema: {"n": int, "lambdas": [[...],...]} (radians),
// optional "group" defaulting to U.
json thompson_instance_to_json(const ThompsonInstance& inst);
ThompsonInstance thompson_instance_from_json(const json& j,
                                             const std::string& where);

json thompson_solution_to_json(const ThompsonSolution& sol, Group g);

// Bare list of unitaries: {"matrices": [A,...]} or a plain JSON array.
json matrices_to_json(const std::vector<Mat>& ms, Group g);
std::vector<Mat> matrices_from_json(const json& j, Group& g,
                                    const std::string& where);

std::uint64_t fnv1a(std::string_view s);
std::string digest_hex(std::string_view s);  // "fnv1a:<16 hex digits>"

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
json parse_file(const std::string& path);

Group group_from_name(const std::string& s, const std::string& where);

}  // namespace io
}  // namespace surfrep
