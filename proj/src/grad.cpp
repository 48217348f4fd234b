#include "parrom/grad.hpp"

#include <cmath>
#include <limits>

#include "parrom/errors.hpp"

namespace parrom {

namespace {

struct PointTerms {
  Matrix XE, XA, XB, XC;
  double js = 0.0;
};

PointTerms point_terms(const Realization& f, const Realization& r) {
  const ShiftedPencil<double> pencil(f.A, f.E);
  const Matrix Pt = pencil.solve_sylvester(r.A, r.E, f.B * r.B.transpose());
  const Matrix Qt = pencil.solve_sylvester_transposed(r.A, r.E, -(f.C.transpose() * r.C));
  const Matrix Ph = solve_lyap(r.A, r.E, r.B * r.B.transpose(), LyapSide::controllability);
  const Matrix Qh = solve_lyap(r.A, r.E, r.C.transpose() * r.C, LyapSide::observability);
  PointTerms t;
  const Matrix QhT = Qh.transpose();
  const Matrix QtT = Qt.transpose();
  t.XE = QhT * r.A * Ph + QtT * (f.A * Pt);
  t.XA = QhT * r.E * Ph + QtT * (f.E * Pt);
  t.XB = QhT * r.B + QtT * f.B;
  const Matrix CPt = f.C * Pt;
  t.XC = r.C * Ph - CPt;
  t.js = (r.C * Ph * r.C.transpose()).trace() - 2.0 * (CPt.array() * r.C.array()).sum();
  return t;
}

Index family_length(const ParamSepMatrix& m) {
  return static_cast<Index>(m.size()) * m.rows() * m.cols();
}

void scatter(const ParamSepMatrix& m, const Matrix& X, const Point& p, double*& out) {
  for (const Term& term : m.terms()) {
    Eigen::Map<Matrix>(out, X.rows(), X.cols()) = (2.0 * term.coeff(p)) * X;
    out += X.size();
  }
}

void gather(const ParamSepMatrix& m, const double*& in, std::vector<Matrix>& dst) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    dst.push_back(Eigen::Map<const Matrix>(in, m.rows(), m.cols()));
    in += m.rows() * m.cols();
  }
}

}  // namespace

GradientSet GradientSet::zeros_like(const ParametricSystem& rom) {
  GradientSet g;
  for (const Term& t : rom.E().terms()) g.dE.push_back(Matrix::Zero(t.matrix.rows(), t.matrix.cols()));
  for (const Term& t : rom.A().terms()) g.dA.push_back(Matrix::Zero(t.matrix.rows(), t.matrix.cols()));
  for (const Term& t : rom.B().terms()) g.dB.push_back(Matrix::Zero(t.matrix.rows(), t.matrix.cols()));
  for (const Term& t : rom.C().terms()) g.dC.push_back(Matrix::Zero(t.matrix.rows(), t.matrix.cols()));
  return g;
}

double GradientSet::norm() const {
  double s = 0.0;
  for (const auto* fam : {&dE, &dA, &dB, &dC}) {
    for (const Matrix& m : *fam) s += m.squaredNorm();
  }
  return std::sqrt(s);
}

ObjectiveGrad gradient(const ParametricSystem& fom, const ParametricSystem& rom, const QuadSpec& spec) {
  if (!(fom.domain() == rom.domain())) throw DimensionError("gradient: domains differ");
  if (fom.inputs() != rom.inputs() || fom.outputs() != rom.outputs()) {
    throw DimensionError("gradient: input/output counts differ");
  }
  const Index length = 1 + family_length(rom.E()) + family_length(rom.A()) +
                       family_length(rom.B()) + family_length(rom.C());
  auto integrand = [&](const Point& p) {
    const PointTerms t = point_terms(fom.at_unchecked(p), rom.at_unchecked(p));
    Vector v(length);
    v[0] = t.js;
    double* out = v.data() + 1;
    scatter(rom.E(), t.XE, p, out);
    scatter(rom.A(), t.XA, p, out);
    scatter(rom.B(), t.XB, p, out);
    scatter(rom.C(), t.XC, p, out);
    return v;
  };
  ObjectiveGrad result;
  try {
    result.quad = integrate(integrand, length, fom.domain(), spec);
  } catch (const NumericError&) {
    result.value = std::numeric_limits<double>::infinity();
    result.grad = GradientSet::zeros_like(rom);
    return result;
  }
  result.value = result.quad.value[0];
  const double* in = result.quad.value.data() + 1;
  gather(rom.E(), in, result.grad.dE);
  gather(rom.A(), in, result.grad.dA);
  gather(rom.B(), in, result.grad.dB);
  gather(rom.C(), in, result.grad.dC);
  return result;
}

std::vector<std::pair<std::string, double>> fonc_residuals(const GradientSet& grad) {
  std::vector<std::pair<std::string, double>> out;
  auto add = [&](const char* family, const std::vector<Matrix>& ms) {
    for (std::size_t i = 0; i < ms.size(); ++i) {
      out.emplace_back(family + std::to_string(i + 1), 0.5 * ms[i].norm());
    }
  };
  add("E", grad.dE);
  add("A", grad.dA);
  add("B", grad.dB);
  add("C", grad.dC);
  return out;
}

std::vector<std::pair<std::string, double>> fonc_residuals(const ParametricSystem& fom,
                                                           const ParametricSystem& rom,
                                                           const QuadSpec& spec) {
  const ObjectiveGrad g = gradient(fom, rom, spec);
  if (!std::isfinite(g.value)) throw NumericError("fonc_residuals: objective evaluation failed");
  return fonc_residuals(g.grad);
}

GradientSet nonparametric_gradient(const Realization& fom, const Realization& rom) {
  const PointTerms t = point_terms(fom, rom);
  GradientSet g;
  g.dE.push_back(2.0 * t.XE);
  g.dA.push_back(2.0 * t.XA);
  g.dB.push_back(2.0 * t.XB);
  g.dC.push_back(2.0 * t.XC);
  return g;
}

}  // namespace parrom
