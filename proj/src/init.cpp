#include "parrom/init.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SVD>

#include "parrom/errors.hpp"
#include "parrom/mateq.hpp"
#include "parrom/parallel.hpp"

namespace parrom {

RomStructure RomStructure::preset(const std::string& name, Index dim) {
  RomStructure s;
  s.name = name;
  const ScalarCoeff one = ScalarCoeff::constant(1.0);
  if (name == "const") {
    s.E = s.A = s.B = s.C = {one};
    return s;
  }
  if (dim != 1) throw ConfigError("structure preset " + name + " needs a one-dimensional parameter");
  const ScalarCoeff p = ScalarCoeff::linear(0, 1);
  if (name == "SP") {
    s.E = {one};
    s.A = {one, p};
    s.B = {one};
    s.C = {one};
  } else if (name == "IO") {
    s.E = {one};
    s.A = {one};
    s.B = {one, p};
    s.C = {one, p};
  } else if (name == "All") {
    s.E = s.A = s.B = s.C = {one, p};
  } else {
    throw ConfigError("unknown structure preset: " + name);
  }
  return s;
}

RomStructure RomStructure::of(const ParametricSystem& sys) {
  RomStructure s;
  auto coeffs = [](const ParamSepMatrix& m) {
    std::vector<ScalarCoeff> out;
    for (const Term& t : m.terms()) out.push_back(t.coeff);
    return out;
  };
  s.E = coeffs(sys.E());
  s.A = coeffs(sys.A());
  s.B = coeffs(sys.B());
  s.C = coeffs(sys.C());
  return s;
}

void RomStructure::validate(const ParamBox& box) const {
  if (E.empty() || A.empty() || B.empty() || C.empty()) {
    throw ConfigError("structure: every family needs at least one coefficient");
  }
  if (std::all_of(frozen.begin(), frozen.end(), [](bool f) { return f; })) {
    throw ConfigError("structure: every family is frozen");
  }
  for (const auto* fam : {&E, &A, &B, &C}) {
    for (const ScalarCoeff& c : *fam) c.validate_on(box);
  }
}

namespace {

// Orthonormal basis of the leading k left singular vectors.
Matrix leading_basis(const Matrix& M, Index k) {
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(k);
}

CVector sorted_shifts(CVector s) {
  std::sort(s.data(), s.data() + s.size(), [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return s;
}

}  // namespace

IrkaResult irka(const Realization& fom, Index r, const IrkaOptions& options) {
  const Index n = fom.A.rows();
  const Index m = fom.B.cols();
  const Index q = fom.C.rows();
  if (r < 1 || r > n) throw ConfigError("irka: reduced order must lie in [1, n]");
  IrkaResult res;
  CVector shifts(r);
  for (Index i = 0; i < r; ++i) {
    const double t = r == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(r - 1);
    shifts[i] = std::pow(10.0, std::log10(options.shift_lo) +
                                   t * (std::log10(options.shift_hi) - std::log10(options.shift_lo)));
  }
  CMatrix bdir = CMatrix::Ones(m, r);
  CMatrix cdir = CMatrix::Ones(q, r);
  const CMatrix Ec = fom.E.cast<Complex>();
  const CMatrix Ac = fom.A.cast<Complex>();
  const CMatrix Bc = fom.B.cast<Complex>();
  const CMatrix CcT = fom.C.transpose().cast<Complex>();

  for (int it = 1; it <= options.max_iter; ++it) {
    CMatrix Vc(n, r), Wc(n, r);
    for (Index i = 0; i < r; ++i) {
      Eigen::PartialPivLU<CMatrix> lu(shifts[i] * Ec - Ac);
      Vc.col(i) = lu.solve(Bc * bdir.col(i));
      Wc.col(i) = detail::lu_solve_transposed(lu, CMatrix(CcT * cdir.col(i)));
    }
    Matrix Vr(n, 2 * r), Wr(n, 2 * r);
    Vr << Vc.real(), Vc.imag();
    Wr << Wc.real(), Wc.imag();
    res.V = leading_basis(Vr, r);
    res.W = leading_basis(Wr, r);
    res.rom.E = res.W.transpose() * fom.E * res.V;
    res.rom.A = res.W.transpose() * fom.A * res.V;
    res.rom.B = res.W.transpose() * fom.B;
    res.rom.C = fom.C * res.V;
    res.iterations = it;

    Eigen::PartialPivLU<Matrix> lu_e(res.rom.E);
    const Matrix K = lu_e.solve(res.rom.A);
    Eigen::ComplexEigenSolver<CMatrix> es(K.cast<Complex>());
    if (es.info() != Eigen::Success) throw NumericError("irka: eigenvalue iteration failed");
    const CMatrix X = es.eigenvectors();
    const CMatrix Binv = X.partialPivLu().solve(lu_e.solve(res.rom.B).cast<Complex>());
    const CVector next = -es.eigenvalues();
    bdir = Binv.transpose();
    cdir = res.rom.C.cast<Complex>() * X;

    const CVector a = sorted_shifts(shifts), b = sorted_shifts(next);
    double change = 0.0;
    for (Index i = 0; i < r; ++i) change = std::max(change, std::abs(a[i] - b[i]) / std::abs(a[i]));
    shifts = next;
    if (change < options.shift_tol) {
      res.converged = true;
      break;
    }
  }
  res.shifts = shifts;
  return res;
}

PirkaResult pirka(const ParametricSystem& fom, const PirkaOptions& options) {
  const ParamBox& box = fom.domain();
  const Index d = box.dim();
  if (options.ps < 1 || options.rs < 1 || options.r < 1) throw ConfigError("pirka: ps, rs, r must be positive");
  Index count = 1;
  for (Index k = 0; k < d; ++k) count *= options.ps;
  if (options.r > 2 * count * options.rs) {
    throw ConfigError("pirka: r exceeds twice the number of local basis vectors");
  }
  if (options.r > fom.order() || options.rs > fom.order()) throw ConfigError("pirka: order too large for FOM");
  std::vector<Point> samples;
  for (Index i = 0; i < count; ++i) {
    Point p(d);
    Index rest = i;
    for (Index k = 0; k < d; ++k) {
      const Index j = rest % options.ps;
      rest /= options.ps;
      const double t = options.ps == 1 ? 0.5 : static_cast<double>(j) / (options.ps - 1);
      p[k] = box.lower()[k] + t * (box.upper()[k] - box.lower()[k]);
    }
    samples.push_back(p);
  }
  std::vector<IrkaResult> local(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    local[i] = irka(fom.at(samples[i]), options.rs, options.irka);
  });
  Matrix stacked(fom.order(), static_cast<Index>(2 * local.size()) * options.rs);
  for (std::size_t i = 0; i < local.size(); ++i) {
    stacked.middleCols(static_cast<Index>(2 * i) * options.rs, options.rs) = local[i].V;
    stacked.middleCols(static_cast<Index>(2 * i + 1) * options.rs, options.rs) = local[i].W;
  }
  const Matrix V = leading_basis(stacked, options.r);
  auto project = [&](const ParamSepMatrix& M, bool left, bool right) {
    std::vector<Matrix> mats;
    for (const Term& t : M.terms()) {
      Matrix x = t.matrix;
      if (left) x = V.transpose() * x;
      if (right) x = x * V;
      mats.push_back(std::move(x));
    }
    return M.with_matrices(std::move(mats));
  };
  ParametricSystem rom(project(fom.E(), true, true), project(fom.A(), true, true),
                       project(fom.B(), true, false), project(fom.C(), false, true), box);
  return PirkaResult{std::move(rom), V, std::move(samples), std::move(local)};
}

ParametricSystem map_to_structure(const ParametricSystem& rom, const RomStructure& structure) {
  const ParamBox& box = rom.domain();
  structure.validate(box);
  const Point center = box.center();
  auto map_family = [&](const ParamSepMatrix& src, const std::vector<ScalarCoeff>& target) {
    std::vector<Term> out;
    for (const ScalarCoeff& c : target) out.push_back(Term{c, Matrix::Zero(src.rows(), src.cols())});
    auto constant_slot = [&]() -> Term* {
      for (Term& t : out) {
        if (t.coeff.is_constant()) return &t;
      }
      return nullptr;
    };
    for (const Term& t : src.terms()) {
      bool placed = false;
      for (Term& o : out) {
        if (o.coeff.mergeable_with(t.coeff)) {
          o.matrix += t.matrix;
          placed = true;
          break;
        }
      }
      if (placed) continue;
      Term* slot = constant_slot();
      if (!slot) throw InitError("map_to_structure: structure has no constant term to absorb " + t.coeff.describe());
      slot->matrix += (t.coeff(center) / slot->coeff(center)) * t.matrix;
    }
    return ParamSepMatrix(std::move(out));
  };
  return ParametricSystem(map_family(rom.E(), structure.E), map_family(rom.A(), structure.A),
                          map_family(rom.B(), structure.B), map_family(rom.C(), structure.C), box);
}

ParametricSystem trivial_init(const RomStructure& structure, Index r, Index inputs, Index outputs,
                              const ParamBox& box, std::uint64_t seed) {
  structure.validate(box);
  if (r < 1) throw ConfigError("trivial_init: r must be positive");
  std::vector<Point> checks;
  if (box.dim() == 1) {
    for (int i = 0; i <= 100; ++i) {
      checks.push_back(Point::Constant(1, box.lower()[0] + (box.upper()[0] - box.lower()[0]) * i / 100.0));
    }
  } else {
    std::mt19937_64 gen(0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 101; ++i) {
      Point p(box.dim());
      for (Index k = 0; k < box.dim(); ++k) p[k] = box.lower()[k] + u(gen) * (box.upper()[k] - box.lower()[k]);
      checks.push_back(p);
    }
  }
  for (const Point& p : checks) {
    if (!(structure.E.front()(p) > 0.0) || !(structure.A.front()(p) > 0.0)) {
      throw InitError("trivial_init: leading E and A coefficients must be positive on the box");
    }
  }
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random_unit = [&](Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) m(i, j) = normal(gen);
    }
    return Matrix(m / m.norm());
  };
  Vector diag(r);
  for (Index i = 0; i < r; ++i) {
    const double t = r == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(r - 1);
    diag[i] = -std::pow(10.0, -1.0 + 2.0 * t);
  }
  auto family = [&](const std::vector<ScalarCoeff>& coeffs, Index rows, Index cols, int kind) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      Matrix m;
      if (kind == 0) m = i == 0 ? Matrix(Matrix::Identity(r, r)) : Matrix(Matrix::Zero(r, r));
      else if (kind == 1) m = i == 0 ? Matrix(diag.asDiagonal()) : Matrix(Matrix::Zero(r, r));
      else m = random_unit(rows, cols);
      terms.push_back(Term{coeffs[i], std::move(m)});
    }
    return ParamSepMatrix(std::move(terms));
  };
  ParamSepMatrix E = family(structure.E, r, r, 0);
  ParamSepMatrix A = family(structure.A, r, r, 1);
  ParamSepMatrix B = family(structure.B, r, inputs, 2);
  ParamSepMatrix C = family(structure.C, outputs, r, 2);
  return ParametricSystem(std::move(E), std::move(A), std::move(B), std::move(C), box);
}

}  // namespace parrom
