#include "parrom/io.hpp"

#include <fstream>

#include "parrom/errors.hpp"

namespace parrom {

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& rows) {
  if (!rows.is_array()) throw ConfigError("matrix must be an array of rows");
  const auto r = static_cast<Index>(rows.size());
  const Index c = r > 0 ? static_cast<Index>(rows[0].size()) : 0;
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != c) {
      throw ConfigError("matrix rows must have equal length");
    }
    for (Index j = 0; j < c; ++j) m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return m;
}

Json coeff_to_json(const ScalarCoeff& c) {
  switch (c.kind()) {
    case ScalarCoeff::Kind::constant:
      return {{"kind", "constant"}, {"value", c.value()}};
    case ScalarCoeff::Kind::monomial:
      return {{"kind", "monomial"}, {"exponents", c.exponents()}};
    case ScalarCoeff::Kind::rational_shift:
      return {{"kind", "rational_shift"}, {"axis", c.axis()}, {"pole", c.pole()}};
    case ScalarCoeff::Kind::custom:
      return {{"kind", "custom"}, {"tag", c.tag()}};
  }
  return {};
}

ScalarCoeff coeff_from_json(const Json& doc) {
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "constant") return ScalarCoeff::constant(doc.value("value", 1.0));
  if (kind == "monomial") return ScalarCoeff::monomial(doc.at("exponents").get<std::vector<int>>());
  if (kind == "rational_shift") {
    return ScalarCoeff::rational_shift(doc.at("axis").get<int>(), doc.at("pole").get<double>());
  }
  if (kind == "custom") return CoeffRegistry::lookup(doc.at("tag").get<std::string>());
  throw ConfigError("unknown coefficient kind '" + kind + "'");
}

namespace {

Json psm_to_json(const ParamSepMatrix& m) {
  Json terms = Json::array();
  for (const auto& t : m.terms()) {
    terms.push_back({{"coeff", coeff_to_json(t.coeff)}, {"matrix", matrix_to_json(t.matrix)}});
  }
  return terms;
}

ParamSepMatrix psm_from_json(const Json& doc, Index rows, Index cols) {
  std::vector<Term> terms;
  for (const auto& t : doc) {
    Matrix m = matrix_from_json(t.at("matrix"));
    // Empty row arrays cannot carry a column count.
    if (m.size() == 0) m.resize(rows, cols);
    terms.push_back(Term{coeff_from_json(t.at("coeff")), std::move(m)});
  }
  return ParamSepMatrix(std::move(terms));
}

}  // namespace

Json to_json(const ParametricSystem& sys) {
  Json doc;
  doc["dims"] = {{"n", sys.order()},
                 {"m", sys.inputs()},
                 {"p", sys.outputs()},
                 {"d", sys.domain().dim()}};
  std::vector<double> lo(sys.domain().lower().data(),
                         sys.domain().lower().data() + sys.domain().dim());
  std::vector<double> hi(sys.domain().upper().data(),
                         sys.domain().upper().data() + sys.domain().dim());
  doc["domain"] = {{"lower", lo}, {"upper", hi}};
  doc["E"] = psm_to_json(sys.E());
  doc["A"] = psm_to_json(sys.A());
  doc["B"] = psm_to_json(sys.B());
  doc["C"] = psm_to_json(sys.C());
  return doc;
}

ParametricSystem system_from_json(const Json& doc) {
  try {
    const auto lo = doc.at("domain").at("lower").get<std::vector<double>>();
    const auto hi = doc.at("domain").at("upper").get<std::vector<double>>();
    ParamBox box(Eigen::Map<const Vector>(lo.data(), static_cast<Index>(lo.size())),
                 Eigen::Map<const Vector>(hi.data(), static_cast<Index>(hi.size())));
    const auto& dims = doc.at("dims");
    const Index n = dims.at("n").get<Index>();
    const Index m = dims.at("m").get<Index>();
    const Index p = dims.at("p").get<Index>();
    ParametricSystem sys(psm_from_json(doc.at("E"), n, n), psm_from_json(doc.at("A"), n, n),
                         psm_from_json(doc.at("B"), n, m), psm_from_json(doc.at("C"), p, n),
                         std::move(box));
    if (sys.order() != n || sys.inputs() != m || sys.outputs() != p) {
      throw ConfigError("system dims do not match the stored matrices");
    }
    return sys;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed system document: ") + e.what());
  }
}

void write_json_file(const Json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << doc.dump(1) << "\n";
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
}

void save_system(const ParametricSystem& sys, const std::string& path) {
  write_json_file(to_json(sys), path);
}

ParametricSystem load_system(const std::string& path) {
  return system_from_json(read_json_file(path));
}

}  // namespace parrom
