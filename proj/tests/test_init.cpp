#include <doctest.h>

#include "helpers.hpp"
#include "parrom/bench.hpp"
#include "parrom/errors.hpp"
#include "parrom/init.hpp"

using namespace parrom;
using namespace testing_util;

namespace {

Realization diag_siso(const Vector& poles) {
  const Index n = poles.size();
  return Realization{Matrix::Identity(n, n), poles.asDiagonal(), Matrix::Ones(n, 1), Matrix::Ones(1, n)};
}

}  // namespace

TEST_CASE("irka with full order is exact") {
  std::mt19937_64 gen(61);
  const Realization fom = random_stable(gen, 4, 1, 1);
  const IrkaResult res = irka(fom, 4);
  CHECK(res.converged);
  CHECK(res.iterations <= 2);
  for (double w : {0.0, 0.5, 3.0}) {
    CHECK(std::abs(transfer_eval(fom, Complex(0, w))(0, 0) - transfer_eval(res.rom, Complex(0, w))(0, 0)) < 1e-10);
  }
}

TEST_CASE("irka on a scalar system recovers it") {
  const Realization fom{Matrix::Constant(1, 1, 2.0), Matrix::Constant(1, 1, -3.0), Matrix::Constant(1, 1, 1.5),
                        Matrix::Constant(1, 1, 0.5)};
  const IrkaResult res = irka(fom, 1);
  CHECK(std::abs(transfer_eval(fom, 0.7)(0, 0) - transfer_eval(res.rom, 0.7)(0, 0)) < 1e-13);
}

TEST_CASE("irka fixed point interpolates at mirrored poles") {
  Vector poles(3);
  poles << -1, -2, -3;
  const Realization fom = diag_siso(poles);
  const IrkaResult res = irka(fom, 2, IrkaOptions{200, 1e-12});
  REQUIRE(res.converged);
  const CVector lam = gen_eigvals(res.rom.A, res.rom.E);
  for (Index i = 0; i < lam.size(); ++i) {
    const Complex s = -lam[i];
    const Complex h = transfer_eval(fom, s)(0, 0);
    CHECK(std::abs(h - transfer_eval(res.rom, s)(0, 0)) <= 1e-6 * std::abs(h));
  }
  CHECK((res.V.transpose() * res.V - Matrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("irka handles complex shifts and MIMO directions") {
  std::mt19937_64 gen(62);
  const ParametricSystem fom = gen_synthetic(20);
  const IrkaResult res = irka(fom.at(Vector::Constant(1, 0.5)), 4);
  CHECK(res.V.cols() == 4);
  CHECK(res.rom.A.allFinite());
  const Realization mimo = random_stable(gen, 12, 2, 3);
  const IrkaResult r2 = irka(mimo, 3);
  CHECK(r2.rom.B.cols() == 2);
  CHECK(r2.rom.C.rows() == 3);
  const CVector lam = gen_eigvals(r2.rom.A, r2.rom.E);
  if (r2.converged) {
    // Tangential interpolation: the gap applied along the residue direction vanishes.
    Eigen::ComplexEigenSolver<CMatrix> es(r2.rom.E.partialPivLu().solve(r2.rom.A).cast<Complex>());
    const CMatrix X = es.eigenvectors();
    const CMatrix Bt = X.partialPivLu().solve(r2.rom.E.partialPivLu().solve(r2.rom.B).cast<Complex>());
    for (Index i = 0; i < 3; ++i) {
      const Complex s = -es.eigenvalues()[i];
      const CVector b = Bt.row(i).transpose();
      const CVector gap = (transfer_eval(mimo, s) - transfer_eval(r2.rom, s)) * b;
      CHECK(gap.norm() <= 1e-6 * (transfer_eval(mimo, s) * b).norm());
    }
  }
}

TEST_CASE("pirka basics") {
  const ParametricSystem fom = gen_synthetic(30);
  PirkaOptions po;
  po.ps = 3;
  po.rs = 2;
  po.r = 6;
  const PirkaResult res = pirka(fom, po);
  CHECK((res.V.transpose() * res.V - Matrix::Identity(6, 6)).norm() <= 1e-12);
  CHECK(res.samples.front()[0] == doctest::Approx(0.02));
  CHECK(res.samples.back()[0] == doctest::Approx(1.0));
  CHECK(res.rom.A().size() == 2);
  CHECK(is_stable(res.rom));
  po.r = 13;
  CHECK_THROWS_AS(pirka(fom, po), ConfigError);
}

TEST_CASE("pirka with p_s = 1 on a constant FOM is a one-sided IRKA projection") {
  std::mt19937_64 gen(63);
  const Realization f = random_stable(gen, 10, 1, 1);
  const ParametricSystem fom = ParametricSystem::constant(f, ParamBox::interval(0.0, 1.0));
  PirkaOptions po;
  po.ps = 1;
  po.rs = 3;
  po.r = 6;
  const PirkaResult res = pirka(fom, po);
  const IrkaResult local = irka(f, 3);
  Matrix VW(10, 6);
  VW << local.V, local.W;
  // Same subspace as the local bases.
  CHECK((res.V - VW * (VW.completeOrthogonalDecomposition().solve(res.V))).norm() < 1e-8);
}

TEST_CASE("pirka with full order reproduces the FOM") {
  const ParametricSystem fom = gen_synthetic(8);
  PirkaOptions po;
  po.ps = 2;
  po.rs = 4;
  po.r = 8;
  const PirkaResult res = pirka(fom, po);
  for (double p : {0.1, 0.7}) {
    const Point q = Vector::Constant(1, p);
    CHECK(std::abs(transfer_eval(fom, Complex(0, 2), q)(0, 0) - transfer_eval(res.rom, Complex(0, 2), q)(0, 0)) < 1e-10);
  }
}

TEST_CASE("structure presets and mapping") {
  const ParamBox box = ParamBox::interval(0.002, 0.02);
  std::mt19937_64 gen(64);
  const Matrix A1 = random_dissipative(gen, 3), A2 = random_dissipative(gen, 3);
  const ParametricSystem rom(ParamSepMatrix::constant(Matrix::Identity(3, 3)), ParamSepMatrix::affine(A1, A2),
                             ParamSepMatrix::constant(randn(gen, 3, 1)), ParamSepMatrix::constant(randn(gen, 1, 3)), box);
  const ParametricSystem io = map_to_structure(rom, RomStructure::preset("IO"));
  REQUIRE(io.A().size() == 1);
  CHECK(rel_err(io.A().term(0).matrix, A1 + 0.011 * A2) < 1e-15);
  REQUIRE(io.B().size() == 2);
  CHECK(io.B().term(1).matrix.isZero(0));
  const ParametricSystem all = map_to_structure(rom, RomStructure::preset("All"));
  CHECK(all.E().size() == 2);
  CHECK(all.E().term(1).matrix.isZero(0));
  CHECK(all.A().term(1).matrix == A2);
  const ParametricSystem sp = map_to_structure(rom, RomStructure::preset("SP"));
  CHECK(sp.A().term(0).matrix == A1);
  CHECK_THROWS_AS(RomStructure::preset("XY"), ConfigError);
  // Variable counts for r = 4, SISO.
  auto count = [](const RomStructure& s, Index r) {
    return static_cast<Index>(s.E.size() + s.A.size()) * r * r + static_cast<Index>(s.B.size() + s.C.size()) * r;
  };
  CHECK(count(RomStructure::preset("SP"), 4) == 56);
  CHECK(count(RomStructure::preset("IO"), 4) == 48);
  CHECK(count(RomStructure::preset("All"), 4) == 80);
}

TEST_CASE("trivial initialization") {
  const ParamBox box = ParamBox::interval(0.5, 2.0);
  const RomStructure s = RomStructure::preset("All");
  const ParametricSystem a = trivial_init(s, 5, 2, 3, box, 7);
  const ParametricSystem b = trivial_init(s, 5, 2, 3, box, 7);
  CHECK(a.B().term(0).matrix == b.B().term(0).matrix);
  CHECK(a.C().term(1).matrix.norm() == doctest::Approx(1.0));
  CHECK(a.E().term(0).matrix == Matrix::Identity(5, 5));
  CHECK(a.A().term(0).matrix(0, 0) == doctest::Approx(-0.1));
  CHECK(a.A().term(0).matrix(4, 4) == doctest::Approx(-10.0));
  CHECK(is_stable(a));
  CHECK(std::abs(max_abscissa_over_box(trivial_init(RomStructure::preset("const"), 4, 1, 1, box, 1)).max_alpha + 0.1) < 1e-12);
  RomStructure neg = RomStructure::preset("const");
  neg.A = {ScalarCoeff::linear(0, 1)};
  CHECK_THROWS_AS(trivial_init(neg, 3, 1, 1, ParamBox::interval(-1.0, 1.0), 1), InitError);
  // Accepted by the optimizer.
  const ParametricSystem fom = gen_synthetic(6, box);
  OptimConfig cfg;
  cfg.max_iter = 2;
  CHECK_NOTHROW(minimize(fom, trivial_init(RomStructure::preset("SP"), 2, 1, 1, box, 3), cfg, QuadSpec::tensor(4)));
}

TEST_CASE("variable counts of the benchmark ROM structures") {
  auto count = [](const RomStructure& s, Index r) {
    const ParametricSystem rom = trivial_init(s, r, 1, 1, ParamBox::interval(1.0, 2.0), 1);
    return PackedVars(rom).size();
  };
  CHECK(count(RomStructure::preset("SP"), 16) == 800);
  CHECK(count(RomStructure::preset("SP"), 12) == 456);
  CHECK(count(RomStructure::preset("SP"), 4) == 56);
  CHECK(count(RomStructure::preset("IO"), 4) == 48);
  CHECK(count(RomStructure::preset("All"), 4) == 80);
}
