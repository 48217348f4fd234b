#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "parrom/bench.hpp"
#include "parrom/mateq.hpp"
#include "parrom/errors.hpp"
#include "parrom/gramians.hpp"
#include "parrom/stability.hpp"

using namespace parrom;
using namespace testing_util;

namespace {

std::vector<Complex> sorted_poles(const ParametricSystem& s, double p) {
  const CVector ev = poles(s, Vector::Constant(1, p));
  std::vector<Complex> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.imag() != b.imag() ? a.imag() < b.imag() : a.real() < b.real();
  });
  return out;
}

}  // namespace

TEST_CASE("synthetic model poles") {
  const ParametricSystem s = gen_synthetic(2);
  const std::vector<Complex> ev = sorted_poles(s, 1.0);
  // a_1 = 0.1, b_1 = 1 for a single block.
  CHECK(std::abs(ev[0] - Complex(-0.1, -1.0)) < 1e-14);
  CHECK(std::abs(ev[1] - Complex(-0.1, 1.0)) < 1e-14);
  CHECK_THROWS_AS(gen_synthetic(7), ModelError);

  const ParametricSystem big = gen_synthetic(20);
  for (double p : {0.02, 0.3, 1.0}) {
    const Realization r = big.at(Vector::Constant(1, p));
    for (Index k = 0; k < 10; ++k) {
      const double a = std::pow(10.0, -1.0 + 2.0 * k / 9.0);
      const double b = std::pow(10.0, 3.0 * k / 9.0);
      const CVector ev2 = gen_eigvals(Matrix(r.A.block(2 * k, 2 * k, 2, 2)), Matrix(Matrix::Identity(2, 2)));
      CHECK(std::abs(ev2[0].real() + p * a) < 1e-12);
      CHECK(std::abs(std::abs(ev2[0].imag()) - b) < 1e-9 * b);
    }
    CHECK(std::abs(spectral_abscissa(r.A, r.E) + 0.1 * p) < 1e-12);
  }
  CHECK(is_stable(big));
  // Real parts strictly decrease in p.
  double prev = 0.0;
  for (double p : {0.02, 0.1, 0.5, 1.0}) {
    const Realization r = big.at(Vector::Constant(1, p));
    const double a = spectral_abscissa(r.A, r.E);
    CHECK(a < prev);
    prev = a;
  }
}

TEST_CASE("parametric Penzl model") {
  const ParametricSystem s = gen_penzl_param(20);
  CHECK(s.order() == 26);
  CHECK(is_stable(s));
  for (double p : {10.0, 55.0, 100.0}) {
    const Realization r = s.at(Vector::Constant(1, p));
    CHECK(std::abs(spectral_abscissa(r.A, r.E) + 1.0) < 1e-12);
    const CVector ev = gen_eigvals(Matrix(r.A.topLeftCorner(2, 2)), Matrix(Matrix::Identity(2, 2)));
    CHECK(std::abs(std::abs(ev[0].imag()) - p) < 1e-12);
    const CVector all = poles(s, Vector::Constant(1, p));
    int fixed200 = 0;
    for (Index i = 0; i < all.size(); ++i) {
      if (std::abs(std::abs(all[i].imag()) - 200.0) < 1e-10 && std::abs(all[i].real() + 1.0) < 1e-10) ++fixed200;
    }
    CHECK(fixed200 == 2);
  }
  // Only the parametric pair moves.
  const std::vector<Complex> a = sorted_poles(s, 10.0), b = sorted_poles(s, 100.0);
  int moved = 0;
  for (std::size_t i = 0; i < a.size(); ++i) moved += std::abs(a[i] - b[i]) > 1e-10;
  CHECK(moved == 2);
  CHECK(s.at(Vector::Constant(1, 10.0)).B.col(0).head(6).isApprox(Vector::Constant(6, 10.0)));
  CHECK(gen_penzl_param().order() == 1006);
}

TEST_CASE("triple chain realization") {
  const TripleChain tc = gen_triple_chain(4);
  const ParametricSystem& s = tc.system;
  CHECK(s.order() == 2 * 13);
  CHECK(tc.gamma > 0.0);
  const Realization at = s.at(Vector::Constant(1, 0.01));
  Eigen::SelfAdjointEigenSolver<Matrix> e_eig(at.E);
  CHECK(e_eig.eigenvalues().minCoeff() > 0.0);
  // Schur complement of E: K - gamma^2 M > 0
  Eigen::SelfAdjointEigenSolver<Matrix> sc(tc.second_order.K - tc.gamma * tc.gamma * tc.second_order.M);
  CHECK(sc.eigenvalues().minCoeff() > 0.0);
  for (int i = 0; i <= 10; ++i) {
    const double p = 2e-3 + 1.8e-2 * i / 10.0;
    const Realization r = s.at(Vector::Constant(1, p));
    Eigen::SelfAdjointEigenSolver<Matrix> es(r.A + r.A.transpose());
    CHECK(es.eigenvalues().maxCoeff() < 0.0);
  }
  CHECK(is_stable(s));
  CHECK_THROWS_AS(gen_triple_chain(0), ModelError);
}

TEST_CASE("triple chain mass and stiffness structure") {
  const SecondOrder so = triple_chain_matrices(2);
  CHECK(so.M.diagonal()(0) == 1.0);
  CHECK(so.M.diagonal()(2) == 2.0);
  CHECK(so.M.diagonal()(4) == 3.0);
  CHECK(so.M.diagonal()(6) == 10.0);
  CHECK(so.K == so.K.transpose());
  // Central mass: three chain springs plus the ground spring.
  CHECK(so.K(6, 6) == doctest::Approx(10.0 + 20.0 + 1.0 + 50.0));
  CHECK(so.K(0, 0) == doctest::Approx(20.0));
}

TEST_CASE("Baur oracle system") {
  const BaurOracle b = gen_baur_oracle(6, 2);
  Matrix LLt(2, 2);
  LLt << 1.0, 0.5, 0.5, 1.0 / 3.0;
  CHECK(rel_err(b.L * b.L.transpose(), LLt) < 1e-15);
  CHECK(is_stable(b.system));
  const BaurOracle again = gen_baur_oracle(6, 2);
  CHECK(again.G.A == b.G.A);
  Point p(2);
  p << 0.3, 0.8;
  const Realization r = b.system.at(p);
  Vector u(2), w(2);
  u << 1.0, 0.3;
  w << 1.0, 0.8;
  const Complex s(0.0, 1.5);
  const Complex direct = transfer_eval(r, s)(0, 0);
  const Complex via_g = (w.transpose().cast<Complex>() * transfer_eval(b.G, s) * u.cast<Complex>())(0, 0);
  CHECK(std::abs(direct - via_g) < 1e-12 * std::abs(direct));
}

TEST_CASE("Baur oracle with B2 = C2 = 0 reduces to a single H2 norm") {
  BaurOracle b = gen_baur_oracle(8, 4);
  const Realization r = b.system.at(Vector::Zero(2));
  const ParametricSystem flat = ParametricSystem::constant(r, b.system.domain());
  CHECK(rel_err(fom_h2l2_norm_sq(flat), h2_norm_sq(r)) < 1e-12);
}
