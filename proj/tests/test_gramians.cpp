#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "helpers.hpp"
#include "parrom/bench.hpp"
#include "parrom/gramians.hpp"

using namespace parrom;
using namespace testing_util;

namespace {

Matrix m1(double v) { return Matrix::Constant(1, 1, v); }

ParametricSystem scalar_system(double a, ParamBox box = ParamBox::interval(0.0, 1.0)) {
  return ParametricSystem::constant(Realization{m1(1), m1(a), m1(1), m1(1)}, box);
}

// H(s; p) = 1 / (s + p)
ParametricSystem shifted_scalar(ParamBox box) {
  return ParametricSystem(ParamSepMatrix::constant(m1(1)),
                          ParamSepMatrix(std::vector<Term>{{ScalarCoeff::linear(0, 1), m1(-1)}}),
                          ParamSepMatrix::constant(m1(1)), ParamSepMatrix::constant(m1(1)), box);
}

}  // namespace

TEST_CASE("scalar Gramian blocks") {
  const GramianBlocks g = gramian_blocks(scalar_system(-1.0), scalar_system(-2.0), Vector::Constant(1, 0.5));
  CHECK(g.Ph(0, 0) == doctest::Approx(0.25));
  CHECK(g.Pt(0, 0) == doctest::Approx(1.0 / 3.0));
  CHECK(g.Qh(0, 0) == doctest::Approx(0.25));
  CHECK(g.Qt(0, 0) == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("exact ROM blocks equal the FOM Gramians") {
  std::mt19937_64 gen(31);
  const Realization r = random_stable(gen, 5, 2, 2);
  const GramianBlocks g = gramian_blocks(r, r);
  const Matrix P = solve_lyap(r.A, r.E, r.B * r.B.transpose());
  const Matrix Q = solve_lyap(r.A, r.E, r.C.transpose() * r.C, LyapSide::observability);
  CHECK(rel_err(g.Pt, P) < 1e-11);
  CHECK(rel_err(g.Ph, P) < 1e-11);
  CHECK(rel_err(g.Qt, -Q) < 1e-11);
  CHECK(rel_err(g.Qh, Q) < 1e-11);
}

TEST_CASE("random Gramian block residuals") {
  std::mt19937_64 gen(32);
  RandomFamilySpec fs;
  fs.n = 12;
  fs.m = 2;
  fs.p = 2;
  const ParametricSystem fom = random_family(gen, fs);
  fs.n = 3;
  const ParametricSystem rom = random_family(gen, fs);
  const Point p = Vector::Constant(1, 0.8);
  const GramianBlocks g = gramian_blocks(fom, rom, p);
  const Realization f = fom.at(p), r = rom.at(p);
  auto scaled = [](const Matrix& res, double a, double x, double e, double rhs) { return res.norm() / (a * x * e + rhs); };
  const Matrix BBh = f.B * r.B.transpose();
  CHECK(scaled(f.A * g.Pt * r.E.transpose() + f.E * g.Pt * r.A.transpose() + BBh, f.A.norm(), g.Pt.norm(), r.E.norm(), BBh.norm()) <= 1e-10);
  const Matrix BhBh = r.B * r.B.transpose();
  CHECK(scaled(r.A * g.Ph * r.E.transpose() + r.E * g.Ph * r.A.transpose() + BhBh, r.A.norm(), g.Ph.norm(), r.E.norm(), BhBh.norm()) <= 1e-10);
  const Matrix CCh = f.C.transpose() * r.C;
  CHECK(scaled(f.A.transpose() * g.Qt * r.E + f.E.transpose() * g.Qt * r.A - CCh, f.A.norm(), g.Qt.norm(), r.E.norm(), CCh.norm()) <= 1e-10);
  const Matrix ChCh = r.C.transpose() * r.C;
  CHECK(scaled(r.A.transpose() * g.Qh * r.E + r.E.transpose() * g.Qh * r.A + ChCh, r.A.norm(), g.Qh.norm(), r.E.norm(), ChCh.norm()) <= 1e-10);
  CHECK(g.Ph == g.Ph.transpose());
}

TEST_CASE("pointwise H2 norms") {
  CHECK(h2_norm_sq(scalar_system(-1.0), Vector::Constant(1, 0.1)) == doctest::Approx(0.5));
  const Realization zeroB{m1(1), m1(-1), m1(0), m1(1)};
  CHECK(h2_norm_sq(zeroB) == 0.0);
  const Realization d{Matrix::Identity(2, 2), Vector(Vector::LinSpaced(2, -1, -2)).asDiagonal(),
                      Matrix::Ones(2, 1), Matrix::Ones(1, 2)};
  // P = [[1/2, 1/3], [1/3, 1/4]]
  CHECK(h2_norm_sq(d) == doctest::Approx(0.5 + 2.0 / 3.0 + 0.25).epsilon(1e-14));
}

TEST_CASE("H2 norm equals the integral of |H(i w)|^2 / (2 pi)") {
  std::mt19937_64 gen(33);
  const Realization r = random_stable(gen, 4, 1, 1);
  // Substitute w = tan(t) on (-pi/2, pi/2).
  const QuadResult q = integrate(
      [&](const Point& t) {
        const double w = std::tan(t[0]);
        const double jac = 1.0 + w * w;
        return Vector::Constant(1, std::norm(transfer_eval(r, Complex(0.0, w))(0, 0)) * jac / (2.0 * M_PI));
      },
      1, ParamBox::interval(-M_PI / 2 + 1e-9, M_PI / 2 - 1e-9), QuadSpec::adaptive(1e-13, 1e-11));
  CHECK(rel_err(q.value[0], h2_norm_sq(r)) < 1e-7);
}

TEST_CASE("trace duality property") {
  std::mt19937_64 gen(34);
  for (int trial = 0; trial < 20; ++trial) {
    const Realization r = random_stable(gen, 3 + trial, 1 + trial % 3, 1 + trial % 2);
    CHECK(rel_err(h2_norm_sq(r), h2_norm_sq_dual(r)) <= 1e-8);
  }
}

TEST_CASE("reduced objective examples") {
  const ParamBox box = ParamBox::interval(1.0, 2.0);
  const ParametricSystem fom = shifted_scalar(box);
  CHECK(std::abs(objective_Js(fom, fom) + std::log(2.0) / 2.0) < 1e-9);
  CHECK(std::abs(fom_h2l2_norm_sq(fom) - std::log(2.0) / 2.0) < 1e-9);
  const ParametricSystem zeroC(ParamSepMatrix::constant(m1(1)), ParamSepMatrix::constant(m1(-3)),
                               ParamSepMatrix::constant(m1(1)), ParamSepMatrix::constant(m1(0)), box);
  CHECK(objective_Js(fom, zeroC) == 0.0);
  // Constant system over a box of width 3.
  const ParametricSystem c = scalar_system(-1.0, ParamBox::interval(0.0, 3.0));
  CHECK(fom_h2l2_norm_sq(c) == doctest::Approx(1.5));
  const ParametricSystem b0 = ParametricSystem::constant(Realization{m1(1), m1(-1), m1(0), m1(1)}, box);
  CHECK(fom_h2l2_norm_sq(b0) == 0.0);
}

TEST_CASE("objective consistency with the error system") {
  std::mt19937_64 gen(35);
  for (int trial = 0; trial < 4; ++trial) {
    RandomFamilySpec fs;
    fs.n = 8;
    fs.d = 1 + trial % 2;
    const ParametricSystem fom = random_family(gen, fs);
    fs.n = 2;
    const ParametricSystem rom = random_family(gen, fs);
    const QuadSpec spec = QuadSpec::adaptive(1e-12, 1e-10);
    const double lhs = objective_Js(fom, rom, spec) + fom_h2l2_norm_sq(fom, spec);
    const double rhs = h2l2_error_sq(fom, rom, spec);
    CHECK(std::abs(lhs - rhs) <= 1e-8 * fom_h2l2_norm_sq(fom, spec));
  }
}

TEST_CASE("objective is +inf when a point fails") {
  const ParamBox box = ParamBox::interval(-1.0, 1.0);
  const ParametricSystem fom = scalar_system(-1.0, box);
  // Ah(p) = p crosses zero inside the box.
  const ParametricSystem rom(ParamSepMatrix::constant(m1(1)),
                             ParamSepMatrix(std::vector<Term>{{ScalarCoeff::linear(0, 1), m1(1)}}),
                             ParamSepMatrix::constant(m1(1)), ParamSepMatrix::constant(m1(1)), box);
  CHECK(std::isinf(objective_Js(fom, rom, QuadSpec::discrete({Vector::Zero(1)}))));
}

TEST_CASE("error metrics") {
  const ParamBox box = ParamBox::interval(1.0, 2.0);
  const ParametricSystem fom = shifted_scalar(box);
  ErrorMetrics m = error_metrics(fom, fom);
  CHECK(m.eps == 0.0);
  CHECK(m.eps_p.size() == 101);
  CHECK(m.omegas.size() == 101);
  CHECK(m.omegas.front() == doctest::Approx(1e-2));
  CHECK(m.omegas.back() == doctest::Approx(1e4));

  const ParametricSystem rom = scalar_system(-1.4, box);
  m = error_metrics(fom, rom);
  // Trapezoid rule over the eps_p grid reproduces eps^2.
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < m.params.size(); ++i) {
    const double h = m.params[i + 1][0] - m.params[i][0];
    integral += 0.5 * h * (m.eps_p[i] * m.eps_p[i] + m.eps_p[i + 1] * m.eps_p[i + 1]);
  }
  CHECK(rel_err(integral, m.eps * m.eps) < 1e-3);
  // |1/(iw + p) - 1/(iw + 1.4)| at the first grid frequency >= 1, p = 1.
  std::size_t j = 0;
  while (m.omegas[j] < 1.0) ++j;
  const double w = m.omegas[j];
  const double direct = std::abs(1.0 / Complex(1.0, w) - 1.0 / Complex(1.4, w)) / m.fom_norm;
  CHECK(std::abs(m.eps_omega_p[0][j] - direct) < 1e-12);

  const std::string path = "test_eps_p.csv";
  write_eps_p_csv(m, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "p,eps_p");
  std::remove(path.c_str());
}

TEST_CASE("Baur setting: Pt is quadratic in p1") {
  const BaurOracle b = gen_baur_oracle(10, 3);
  const ParametricSystem rom = ParametricSystem::constant(
      Realization{Matrix::Identity(2, 2), -Matrix(Vector(Vector::LinSpaced(2, 1, 2)).asDiagonal()),
                  Matrix::Ones(2, 1), Matrix::Ones(1, 2)},
      b.system.domain());
  // With a constant ROM, Pt depends affinely on p1 through B(p).
  Point p(2);
  p << 0.0, 0.4;
  const Matrix P0 = gramian_blocks(b.system, rom, p).Pt;
  p[0] = 1.0;
  const Matrix P1 = gramian_blocks(b.system, rom, p).Pt;
  p[0] = 0.37;
  CHECK(rel_err(gramian_blocks(b.system, rom, p).Pt, 0.63 * P0 + 0.37 * P1) < 1e-12);
}
