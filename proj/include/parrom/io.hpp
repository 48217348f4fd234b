#ifndef PARROM_IO_HPP
#define PARROM_IO_HPP

#include <string>

#include <json.hpp>

#include "parrom/psys.hpp"

namespace parrom {

using Json = nlohmann::json;

/// Document layout:
///   {"dims": {"n", "m", "p", "d"}, "domain": {"lower", "upper"},
///    "E": [{"coeff": {...}, "matrix": [[...], ...]}, ...], "A": ..., "B": ..., "C": ...}
/// Coefficient descriptors are tagged by "kind": constant (value), monomial
/// (exponents), rational_shift (axis, pole) or custom (tag, resolved through
/// CoeffRegistry).
Json to_json(const ParametricSystem& sys);
ParametricSystem system_from_json(const Json& doc);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& rows);

Json coeff_to_json(const ScalarCoeff& c);
ScalarCoeff coeff_from_json(const Json& doc);

void save_system(const ParametricSystem& sys, const std::string& path);
ParametricSystem load_system(const std::string& path);

void write_json_file(const Json& doc, const std::string& path);
Json read_json_file(const std::string& path);

}  // namespace parrom

#endif  // PARROM_IO_HPP
