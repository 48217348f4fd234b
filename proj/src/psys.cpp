#include "parrom/psys.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include <Eigen/Dense>

#include "parrom/errors.hpp"
#include "parrom/mateq.hpp"

namespace parrom {

ParamBox::ParamBox(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() < 1 || lower_.size() != upper_.size()) {
    throw DomainError("ParamBox: bounds must be non-empty and of equal length");
  }
  for (Index k = 0; k < lower_.size(); ++k) {
    if (!(lower_[k] < upper_[k])) throw DomainError("ParamBox: degenerate box");
  }
}

ParamBox ParamBox::interval(double lower, double upper) {
  return ParamBox(Vector::Constant(1, lower), Vector::Constant(1, upper));
}

double ParamBox::volume() const { return (upper_ - lower_).prod(); }

bool ParamBox::contains(const Point& p, double tol) const {
  if (p.size() != dim()) return false;
  for (Index k = 0; k < dim(); ++k) {
    if (p[k] < lower_[k] - tol || p[k] > upper_[k] + tol) return false;
  }
  return true;
}

ScalarCoeff ScalarCoeff::constant(double value) {
  ScalarCoeff c;
  c.kind_ = Kind::constant;
  c.value_ = value;
  return c;
}

ScalarCoeff ScalarCoeff::monomial(std::vector<int> exponents) {
  for (int e : exponents) {
    if (e < 0) throw DomainError("monomial exponents must be non-negative");
  }
  ScalarCoeff c;
  c.kind_ = Kind::monomial;
  c.exponents_ = std::move(exponents);
  return c;
}

ScalarCoeff ScalarCoeff::linear(int axis, int dim) {
  std::vector<int> e(static_cast<std::size_t>(dim), 0);
  e.at(static_cast<std::size_t>(axis)) = 1;
  return monomial(std::move(e));
}

ScalarCoeff ScalarCoeff::rational_shift(int axis, double pole) {
  ScalarCoeff c;
  c.kind_ = Kind::rational_shift;
  c.axis_ = axis;
  c.value_ = pole;
  return c;
}

ScalarCoeff ScalarCoeff::custom(std::string tag, Function fn) {
  ScalarCoeff c;
  c.kind_ = Kind::custom;
  c.tag_ = std::move(tag);
  c.fn_ = std::make_shared<const Function>(std::move(fn));
  return c;
}

double ScalarCoeff::operator()(const Point& p) const {
  switch (kind_) {
    case Kind::constant:
      return value_;
    case Kind::monomial: {
      if (static_cast<Index>(exponents_.size()) != p.size()) {
        throw DimensionError("monomial exponent count does not match parameter dimension");
      }
      double v = 1.0;
      for (std::size_t k = 0; k < exponents_.size(); ++k) {
        for (int e = 0; e < exponents_[k]; ++e) v *= p[static_cast<Index>(k)];
      }
      return v;
    }
    case Kind::rational_shift:
      return 1.0 / (p[axis_] - value_);
    case Kind::custom:
      return (*fn_)(p);
  }
  return 0.0;
}

bool ScalarCoeff::is_constant() const {
  if (kind_ == Kind::constant) return true;
  if (kind_ == Kind::monomial) {
    for (int e : exponents_) {
      if (e != 0) return false;
    }
    return true;
  }
  return false;
}

bool ScalarCoeff::mergeable_with(const ScalarCoeff& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::constant:
      return value_ == other.value_;
    case Kind::monomial:
      return exponents_ == other.exponents_;
    case Kind::rational_shift:
      return axis_ == other.axis_ && value_ == other.value_;
    case Kind::custom:
      return false;
  }
  return false;
}

void ScalarCoeff::validate_on(const ParamBox& box) const {
  switch (kind_) {
    case Kind::monomial:
      if (static_cast<Index>(exponents_.size()) != box.dim()) {
        throw DimensionError("monomial exponent count does not match parameter dimension");
      }
      break;
    case Kind::rational_shift:
      if (axis_ < 0 || axis_ >= box.dim()) throw DimensionError("rational shift axis out of range");
      if (value_ >= box.lower()[axis_] && value_ <= box.upper()[axis_]) {
        throw DomainError("rational shift pole lies inside the parameter box");
      }
      break;
    default:
      break;
  }
}

std::string ScalarCoeff::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::constant:
      os << value_;
      break;
    case Kind::monomial: {
      bool any = false;
      for (std::size_t k = 0; k < exponents_.size(); ++k) {
        if (exponents_[k] == 0) continue;
        if (any) os << "*";
        os << "p" << k;
        if (exponents_[k] > 1) os << "^" << exponents_[k];
        any = true;
      }
      if (!any) os << "1";
      break;
    }
    case Kind::rational_shift:
      os << "1/(p" << axis_ << " - " << value_ << ")";
      break;
    case Kind::custom:
      os << tag_;
      break;
  }
  return os.str();
}

namespace {
std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}
std::map<std::string, ScalarCoeff::Function>& registry() {
  static std::map<std::string, ScalarCoeff::Function> r;
  return r;
}
}  // namespace

void CoeffRegistry::add(const std::string& tag, ScalarCoeff::Function fn) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  registry()[tag] = std::move(fn);
}

ScalarCoeff CoeffRegistry::lookup(const std::string& tag) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto it = registry().find(tag);
  if (it == registry().end()) throw ConfigError("unknown custom coefficient function '" + tag + "'");
  return ScalarCoeff::custom(tag, it->second);
}

ParamSepMatrix::ParamSepMatrix(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw DimensionError("ParamSepMatrix needs at least one term");
  rows_ = terms_.front().matrix.rows();
  cols_ = terms_.front().matrix.cols();
  for (const auto& t : terms_) {
    if (t.matrix.rows() != rows_ || t.matrix.cols() != cols_) {
      throw DimensionError("ParamSepMatrix: inconsistent term shapes");
    }
  }
}

ParamSepMatrix ParamSepMatrix::constant(Matrix m) {
  return ParamSepMatrix({Term{ScalarCoeff::constant(), std::move(m)}});
}

ParamSepMatrix ParamSepMatrix::affine(Matrix m1, Matrix m2, int axis, int dim) {
  return ParamSepMatrix({Term{ScalarCoeff::constant(), std::move(m1)},
                         Term{ScalarCoeff::linear(axis, dim), std::move(m2)}});
}

Matrix ParamSepMatrix::operator()(const Point& p) const {
  Matrix out = Matrix::Zero(rows_, cols_);
  for (const auto& t : terms_) {
    const double f = t.coeff(p);
    if (f != 0.0) out.noalias() += f * t.matrix;
  }
  return out;
}

ParamSepMatrix ParamSepMatrix::with_matrices(std::vector<Matrix> matrices) const {
  if (matrices.size() != terms_.size()) throw DimensionError("with_matrices: term count mismatch");
  std::vector<Term> terms;
  terms.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    terms.push_back(Term{terms_[i].coeff, std::move(matrices[i])});
  }
  return ParamSepMatrix(std::move(terms));
}

ParamSepMatrix ParamSepMatrix::merged() const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    bool done = false;
    for (auto& o : out) {
      if (o.coeff.mergeable_with(t.coeff)) {
        o.matrix += t.matrix;
        done = true;
        break;
      }
    }
    if (!done) out.push_back(t);
  }
  return ParamSepMatrix(std::move(out));
}

bool ParamSepMatrix::has_constant_coefficients() const {
  for (const auto& t : terms_) {
    if (!t.coeff.is_constant()) return false;
  }
  return true;
}

ParametricSystem::ParametricSystem(ParamSepMatrix E, ParamSepMatrix A, ParamSepMatrix B,
                                   ParamSepMatrix C, ParamBox domain)
    : E_(std::move(E)), A_(std::move(A)), B_(std::move(B)), C_(std::move(C)),
      domain_(std::move(domain)) {
  const Index n = A_.rows();
  if (A_.cols() != n || E_.rows() != n || E_.cols() != n || B_.rows() != n || C_.cols() != n) {
    throw DimensionError("ParametricSystem: inconsistent dimensions");
  }
  for (const auto* m : {&E_, &A_, &B_, &C_}) {
    for (const auto& t : m->terms()) t.coeff.validate_on(domain_);
  }
}

ParametricSystem ParametricSystem::constant(const Realization& r, ParamBox domain) {
  return ParametricSystem(ParamSepMatrix::constant(r.E), ParamSepMatrix::constant(r.A),
                          ParamSepMatrix::constant(r.B), ParamSepMatrix::constant(r.C),
                          std::move(domain));
}

Realization ParametricSystem::at(const Point& p) const {
  if (!domain_.contains(p)) throw DomainError("parameter point outside the box");
  return at_unchecked(p);
}

Realization ParametricSystem::at_unchecked(const Point& p) const {
  return Realization{E_(p), A_(p), B_(p), C_(p)};
}

bool ParametricSystem::is_nonparametric() const {
  return E_.has_constant_coefficients() && A_.has_constant_coefficients() &&
         B_.has_constant_coefficients() && C_.has_constant_coefficients();
}

ParametricSystem ParametricSystem::with_domain(ParamBox domain) const {
  return ParametricSystem(E_, A_, B_, C_, std::move(domain));
}

Matrix eval_matrix(const ParamSepMatrix& m, const ParamBox& box, const Point& p) {
  if (!box.contains(p)) throw DomainError("parameter point outside the box");
  return m(p);
}

CMatrix transfer_eval(const Realization& r, Complex s) {
  const CMatrix shifted = s * r.E.cast<Complex>() - r.A.cast<Complex>();
  Eigen::PartialPivLU<CMatrix> lu(shifted);
  const double rc = lu.rcond();
  if (!(rc > 1e-15)) {
    std::ostringstream os;
    os << "singular shifted matrix sE - A at s = " << s.real() << "+" << s.imag() << "i";
    throw NumericError(os.str());
  }
  return r.C.cast<Complex>() * lu.solve(r.B.cast<Complex>());
}

CMatrix transfer_eval(const ParametricSystem& sys, Complex s, const Point& p) {
  return transfer_eval(sys.at(p), s);
}

namespace {

// Places the terms of a (fom-side) and b (rom-side) at the given offsets of a
// zero matrix of shape rows x cols.
ParamSepMatrix embed(const ParamSepMatrix& a, Index ar, Index ac, const ParamSepMatrix& b,
                     Index br, Index bc, Index rows, Index cols, double b_sign) {
  std::vector<Term> terms;
  for (const auto& t : a.terms()) {
    Matrix m = Matrix::Zero(rows, cols);
    m.block(ar, ac, t.matrix.rows(), t.matrix.cols()) = t.matrix;
    terms.push_back(Term{t.coeff, std::move(m)});
  }
  for (const auto& t : b.terms()) {
    Matrix m = Matrix::Zero(rows, cols);
    m.block(br, bc, t.matrix.rows(), t.matrix.cols()) = b_sign * t.matrix;
    terms.push_back(Term{t.coeff, std::move(m)});
  }
  return ParamSepMatrix(std::move(terms)).merged();
}

}  // namespace

ParametricSystem error_system(const ParametricSystem& fom, const ParametricSystem& rom) {
  if (fom.inputs() != rom.inputs() || fom.outputs() != rom.outputs()) {
    throw DimensionError("error_system: input/output counts differ");
  }
  if (!(fom.domain() == rom.domain())) throw DimensionError("error_system: domains differ");
  const Index n = fom.order();
  const Index r = rom.order();
  const Index m = fom.inputs();
  const Index q = fom.outputs();
  return ParametricSystem(embed(fom.E(), 0, 0, rom.E(), n, n, n + r, n + r, 1.0),
                          embed(fom.A(), 0, 0, rom.A(), n, n, n + r, n + r, 1.0),
                          embed(fom.B(), 0, 0, rom.B(), n, 0, n + r, m, 1.0),
                          embed(fom.C(), 0, 0, rom.C(), 0, n, q, n + r, -1.0), fom.domain());
}

CVector poles(const ParametricSystem& sys, const Point& p) {
  const Realization r = sys.at(p);
  return gen_eigvals(r.A, r.E);
}

}  // namespace parrom
