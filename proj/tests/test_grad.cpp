#include <doctest.h>

#include "helpers.hpp"
#include "parrom/grad.hpp"
#include "parrom/optim.hpp"

using namespace parrom;
using namespace testing_util;

namespace {

Matrix m1(double v) { return Matrix::Constant(1, 1, v); }

ParametricSystem scalar_system(double a, ParamBox box = ParamBox::interval(0.0, 1.0)) {
  return ParametricSystem::constant(Realization{m1(1), m1(a), m1(1), m1(1)}, box);
}

}  // namespace

TEST_CASE("nonparametric scalar gradient") {
  const Realization fom{m1(1), m1(-1), m1(1), m1(1)};
  const Realization rom{m1(1), m1(-2), m1(1), m1(1)};
  const GradientSet g = nonparametric_gradient(fom, rom);
  CHECK(g.dC[0](0, 0) == doctest::Approx(-1.0 / 6.0).epsilon(1e-13));
  // The parametric gradient on a unit-width box agrees.
  const ObjectiveGrad pg = gradient(scalar_system(-1.0), scalar_system(-2.0));
  for (const auto& [a, b] : {std::pair{&g.dE, &pg.grad.dE}, {&g.dA, &pg.grad.dA}, {&g.dB, &pg.grad.dB}, {&g.dC, &pg.grad.dC}}) {
    CHECK(rel_err((*a)[0], (*b)[0]) < 1e-12);
  }
}

TEST_CASE("nonparametric gradient matches finite differences") {
  std::mt19937_64 gen(41);
  const Realization fom = random_stable(gen, 6, 2, 1);
  const Realization rom = random_stable(gen, 2, 2, 1);
  const GradientSet g = nonparametric_gradient(fom, rom);
  auto js = [&](const Realization& r) {
    const GramianBlocks b = gramian_blocks(fom, r, GramianSide::controllability);
    return js_integrand(fom, r, b);
  };
  const double h = 1e-6;
  for (int fam = 0; fam < 4; ++fam) {
    Matrix Realization::*field = fam == 0 ? &Realization::E : fam == 1 ? &Realization::A : fam == 2 ? &Realization::B : &Realization::C;
    const Matrix& G = fam == 0 ? g.dE[0] : fam == 1 ? g.dA[0] : fam == 2 ? g.dB[0] : g.dC[0];
    for (Index i = 0; i < G.size(); ++i) {
      Realization plus = rom, minus = rom;
      (plus.*field).data()[i] += h;
      (minus.*field).data()[i] -= h;
      const double fd = (js(plus) - js(minus)) / (2 * h);
      CHECK(std::abs(G.data()[i] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("exact ROM has zero gradient") {
  std::mt19937_64 gen(42);
  RandomFamilySpec fs;
  fs.n = 4;
  const ParametricSystem fom = random_family(gen, fs);
  const QuadSpec spec = QuadSpec::tensor(6);
  const ObjectiveGrad g = gradient(fom, fom, spec);
  CHECK(g.grad.norm() < 1e-11);
  for (const auto& [label, value] : fonc_residuals(g.grad)) {
    CAPTURE(label);
    CHECK(value < 1e-11);
  }
  CHECK(std::abs(g.value + fom_h2l2_norm_sq(fom, spec)) < 1e-11);
}

TEST_CASE("scaling family: gradient of E1 is e1 times the assembled gradient") {
  // Eh = e1(p) Eh1 + Eh2 on a discrete measure with a single point.
  std::mt19937_64 gen(43);
  const ParamBox box = ParamBox::interval(1.0, 2.0);
  const Realization f = random_stable(gen, 5, 1, 1);
  const ParametricSystem fom = ParametricSystem::constant(f, box);
  const Matrix Eh1 = random_spd(gen, 2), Eh2 = random_spd(gen, 2, 0.1);
  const Realization r = random_stable(gen, 2, 1, 1);
  const ParametricSystem rom(ParamSepMatrix(std::vector<Term>{{ScalarCoeff::linear(0, 1), Eh1},
                                                              {ScalarCoeff::constant(), Eh2}}),
                             ParamSepMatrix::constant(r.A), ParamSepMatrix::constant(r.B),
                             ParamSepMatrix::constant(r.C), box);
  const double p0 = 1.6;
  const ObjectiveGrad g = gradient(fom, rom, QuadSpec::discrete({Vector::Constant(1, p0)}));
  const GradientSet assembled = nonparametric_gradient(f, rom.at(Vector::Constant(1, p0)));
  CHECK(rel_err(g.grad.dE[0], p0 * assembled.dE[0]) < 1e-12);
  CHECK(rel_err(g.grad.dE[1], assembled.dE[0]) < 1e-12);
}

TEST_CASE("gated objective") {
  const ParametricSystem fom = scalar_system(-1.0);
  const ParametricSystem unstable = scalar_system(1.0);
  const GatedValue u = gated_objective(fom, unstable);
  CHECK(std::isinf(u.value));
  CHECK(u.grad.norm() == 0.0);
  const ParametricSystem stable = scalar_system(-2.0);
  const GatedValue s = gated_objective(fom, stable);
  const ObjectiveGrad direct = gradient(fom, stable);
  CHECK(s.value == direct.value);
  CHECK(s.stability.max_alpha == doctest::Approx(-2.0));
  // Stable at both ends but not in the middle: -1 + 4 p (1 - p).
  const ParametricSystem crossing(ParamSepMatrix::constant(m1(1)),
                                  ParamSepMatrix(std::vector<Term>{{ScalarCoeff::constant(), m1(-1.0)},
                                                                   {ScalarCoeff::monomial({1}), m1(4.2)},
                                                                   {ScalarCoeff::monomial({2}), m1(-4.2)}}),
                                  ParamSepMatrix::constant(m1(1)), ParamSepMatrix::constant(m1(1)),
                                  ParamBox::interval(0.0, 1.0));
  CHECK(std::isinf(gated_objective(fom, crossing).value));
}
