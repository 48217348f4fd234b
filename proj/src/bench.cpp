#include "parrom/bench.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "parrom/errors.hpp"
#include "parrom/stability.hpp"

namespace parrom {

namespace {

double logspace_at(double lo, double hi, Index i, Index count) {
  const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
  return std::pow(10.0, std::log10(lo) + t * (std::log10(hi) - std::log10(lo)));
}

ScalarCoeff p_axis(const ParamBox& box, int axis = 0) {
  return ScalarCoeff::linear(axis, static_cast<int>(box.dim()));
}

}  // namespace

ParametricSystem gen_synthetic(Index n, ParamBox box) {
  if (n < 2 || n % 2 != 0) throw ModelError("synthetic model needs an even order n >= 2, got " + std::to_string(n));
  if (box.dim() != 1) throw ModelError("synthetic model has one parameter");
  const ScalarCoeff p_coeff = p_axis(box);
  const Index k = n / 2;
  Matrix A1 = Matrix::Zero(n, n), A2 = Matrix::Zero(n, n);
  for (Index i = 0; i < k; ++i) {
    const double a = logspace_at(1e-1, 1e1, i, k);
    const double b = logspace_at(1e0, 1e3, i, k);
    A1(2 * i, 2 * i + 1) = b;
    A1(2 * i + 1, 2 * i) = -b;
    A2(2 * i, 2 * i) = -a;
    A2(2 * i + 1, 2 * i + 1) = -a;
  }
  const Vector ones = Vector::Ones(n);
  return ParametricSystem(ParamSepMatrix::constant(Matrix::Identity(n, n)),
                          ParamSepMatrix(std::vector<Term>{{ScalarCoeff::constant(), A1}, {p_coeff, A2}}),
                          ParamSepMatrix::constant(ones), ParamSepMatrix::constant(ones.transpose()),
                          std::move(box));
}

ParametricSystem gen_penzl_param(Index tail, ParamBox box) {
  if (tail < 1) throw ModelError("Penzl model needs a non-empty diagonal tail");
  if (box.dim() != 1) throw ModelError("Penzl model has one parameter");
  const ScalarCoeff p_coeff = p_axis(box);
  const Index n = 6 + tail;
  Matrix A1 = Matrix::Zero(n, n), A2 = Matrix::Zero(n, n);
  A1.topLeftCorner(6, 6).diagonal().setConstant(-1.0);
  A2(0, 1) = 1.0;
  A2(1, 0) = -1.0;
  A1(2, 3) = 200.0;
  A1(3, 2) = -200.0;
  A1(4, 5) = 400.0;
  A1(5, 4) = -400.0;
  for (Index i = 0; i < tail; ++i) {
    A1(6 + i, 6 + i) = tail == 1 ? -1.0 : -(1.0 + 999.0 * static_cast<double>(i) / static_cast<double>(tail - 1));
  }
  Vector b = Vector::Ones(n);
  b.head(6).setConstant(10.0);
  return ParametricSystem(ParamSepMatrix::constant(Matrix::Identity(n, n)),
                          ParamSepMatrix(std::vector<Term>{{ScalarCoeff::constant(), A1}, {p_coeff, A2}}),
                          ParamSepMatrix::constant(b), ParamSepMatrix::constant(b.transpose()),
                          std::move(box));
}

SecondOrder triple_chain_matrices(Index chain_length, const ChainConstants& c) {
  if (chain_length < 1) throw ModelError("triple chain needs at least one mass per chain");
  const Index nt = 3 * chain_length + 1;
  const Index center = nt - 1;
  SecondOrder so;
  so.M = Matrix::Zero(nt, nt);
  so.K = Matrix::Zero(nt, nt);
  auto spring = [&](Index i, Index j, double k) {
    so.K(i, i) += k;
    if (j >= 0) {
      so.K(j, j) += k;
      so.K(i, j) -= k;
      so.K(j, i) -= k;
    }
  };
  for (Index chain = 0; chain < 3; ++chain) {
    const double k = c.stiffness[chain];
    const Index first = chain * chain_length;
    for (Index j = 0; j < chain_length; ++j) so.M(first + j, first + j) = c.masses[chain];
    spring(first, -1, k);
    for (Index j = 0; j + 1 < chain_length; ++j) spring(first + j, first + j + 1, k);
    spring(first + chain_length - 1, center, k);
  }
  so.M(center, center) = c.central_mass;
  spring(center, -1, c.ground_stiffness);
  so.B = Matrix::Ones(nt, 1);
  so.C = Matrix::Ones(1, nt);
  return so;
}

TripleChain gen_triple_chain(Index chain_length, ParamBox box, const ChainConstants& constants) {
  if (box.dim() != 1) throw ModelError("triple chain has one parameter");
  if (!(box.lower()[0] > 0.0)) throw ModelError("triple chain damping parameter must be positive");
  SecondOrder so = triple_chain_matrices(chain_length, constants);
  const Matrix& M = so.M;
  const Matrix& K = so.K;
  const Index nt = M.rows();
  const Matrix MK = M + K;
  const Eigen::LLT<Matrix> k_llt(K);
  if (k_llt.info() != Eigen::Success) throw ModelError("triple chain: K is not positive definite");
  auto lambda_min = [&](const Point& p) {
    const Matrix D = p[0] * MK;
    const Matrix Mbar = M + 0.25 * D * k_llt.solve(D);
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(D, Mbar, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  };
  const BoxMax worst = maximize_over_box([&](const Point& p) { return -lambda_min(p); }, box);
  const double gamma = -0.5 * worst.value;
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ModelError("triple chain: non-positive gamma");

  const ScalarCoeff p_coeff = p_axis(box);
  const Index n = 2 * nt;
  Matrix E(n, n), A1(n, n), A2 = Matrix::Zero(n, n);
  E << K, gamma * M, gamma * M, M;
  A1 << -gamma * K, K, -K, gamma * M;
  A2.topRightCorner(nt, nt) = -gamma * MK;
  A2.bottomRightCorner(nt, nt) = -MK;
  Matrix B(n, so.B.cols());
  B << gamma * so.B, so.B;
  Matrix C = Matrix::Zero(so.C.rows(), n);
  C.leftCols(nt) = so.C;
  ParametricSystem sys(ParamSepMatrix::constant(E),
                       ParamSepMatrix(std::vector<Term>{{ScalarCoeff::constant(), A1}, {p_coeff, A2}}),
                       ParamSepMatrix::constant(B), ParamSepMatrix::constant(C), std::move(box));
  return TripleChain{std::move(sys), std::move(so), gamma};
}

BaurOracle gen_baur_oracle(Index n, std::uint64_t seed) {
  if (n < 2) throw ModelError("Baur oracle needs n >= 2");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random = [&](Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) m(i, j) = normal(gen);
    }
    return m;
  };
  const Matrix X = random(n, n) / std::sqrt(static_cast<double>(n));
  const Matrix S = random(n, n) / std::sqrt(static_cast<double>(n));
  const Matrix Y = random(n, n) / std::sqrt(static_cast<double>(n));
  const Matrix A = -(X * X.transpose() + 0.1 * Matrix::Identity(n, n)) + (S - S.transpose());
  const Matrix E = Y * Y.transpose() + Matrix::Identity(n, n);
  const Matrix B1 = random(n, 1), B2 = random(n, 1);
  const Matrix C1 = random(1, n), C2 = random(1, n);

  const ParamBox box(Vector::Zero(2), Vector::Ones(2));
  ParametricSystem sys(ParamSepMatrix::constant(E), ParamSepMatrix::constant(A),
                       ParamSepMatrix(std::vector<Term>{{ScalarCoeff::constant(), B1},
                                                        {ScalarCoeff::linear(0, 2), B2}}),
                       ParamSepMatrix(std::vector<Term>{{ScalarCoeff::constant(), C1},
                                                        {ScalarCoeff::linear(1, 2), C2}}),
                       box);
  BaurOracle out{std::move(sys), {}, Matrix(2, 2), {}};
  out.G.E = E;
  out.G.A = A;
  out.G.B.resize(n, 2);
  out.G.B << B1, B2;
  out.G.C.resize(2, n);
  out.G.C << C1, C2;
  out.L << 1.0, 0.0, 0.5, 1.0 / (2.0 * std::sqrt(3.0));
  out.weighted = Realization{E, A, out.G.B * out.L, out.L.transpose() * out.G.C};
  return out;
}

}  // namespace parrom
