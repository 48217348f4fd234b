#ifndef PARROM_TEST_HELPERS_HPP
#define PARROM_TEST_HELPERS_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "parrom/psys.hpp"

namespace testing_util {

using parrom::Index;
using parrom::Matrix;
using parrom::Vector;

inline Matrix randn(std::mt19937_64& gen, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(gen);
  }
  return m;
}

/// Symmetric positive definite, eigenvalues >= shift.
inline Matrix random_spd(std::mt19937_64& gen, Index n, double shift = 1.0) {
  const Matrix X = randn(gen, n, n) / std::sqrt(static_cast<double>(n));
  return X * X.transpose() + shift * Matrix::Identity(n, n);
}

/// A + A^T negative definite.
inline Matrix random_dissipative(std::mt19937_64& gen, Index n, double shift = 0.5) {
  const Matrix S = randn(gen, n, n) / std::sqrt(static_cast<double>(n));
  return -random_spd(gen, n, shift) + (S - S.transpose());
}

inline parrom::Realization random_stable(std::mt19937_64& gen, Index n, Index m, Index p) {
  return parrom::Realization{random_spd(gen, n), random_dissipative(gen, n), randn(gen, n, m),
                             randn(gen, p, n)};
}

/// Kronecker oracle for A X Eh^T + E X Ah^T + M = 0.
inline Matrix kron_sylvester(const Matrix& A, const Matrix& E, const Matrix& Ah,
                             const Matrix& Eh, const Matrix& M) {
  const Matrix K = Eigen::kroneckerProduct(Eh, A) + Eigen::kroneckerProduct(Ah, E);
  const Vector x = K.fullPivLu().solve(-Eigen::Map<const Vector>(M.data(), M.size()));
  return Eigen::Map<const Matrix>(x.data(), A.rows(), Ah.rows());
}

/// Kronecker oracle for A^T X Eh + E^T X Ah + N = 0.
inline Matrix kron_sylvester_transposed(const Matrix& A, const Matrix& E, const Matrix& Ah,
                                        const Matrix& Eh, const Matrix& N) {
  const Matrix K = Eigen::kroneckerProduct(Eh.transpose(), A.transpose()) +
                   Eigen::kroneckerProduct(Ah.transpose(), E.transpose());
  const Vector x = K.fullPivLu().solve(-Eigen::Map<const Vector>(N.data(), N.size()));
  return Eigen::Map<const Matrix>(x.data(), A.rows(), Ah.rows());
}

inline double rel_err(const Matrix& a, const Matrix& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Random parametric system with positive coefficient functions on the box,
/// dissipative A terms and SPD E terms, so A(p) + A(p)^T < 0 and E(p) > 0.
struct RandomFamilySpec {
  Index n = 6, m = 1, p = 1;
  int d = 1;
  int qE = 1, qA = 2, qB = 1, qC = 1;
};

inline parrom::ScalarCoeff positive_coeff(int index, int d) {
  using parrom::ScalarCoeff;
  if (index == 0) return ScalarCoeff::constant(1.0);
  std::vector<int> e(static_cast<std::size_t>(d), 0);
  e[static_cast<std::size_t>((index - 1) % d)] = 1 + (index - 1) / d;
  return ScalarCoeff::monomial(e);
}

/// Coefficients usable for any sign of the matrices (B, C families).
inline parrom::ScalarCoeff any_coeff(int index, int d) {
  if (index == 2) return parrom::ScalarCoeff::rational_shift(0, -1.0);
  return positive_coeff(index, d);
}

inline parrom::ParametricSystem random_family(std::mt19937_64& gen, const RandomFamilySpec& s,
                                              double lower = 0.5, double upper = 1.5) {
  using namespace parrom;
  const ParamBox box(Vector::Constant(s.d, lower), Vector::Constant(s.d, upper));
  std::vector<Term> E, A, B, C;
  for (int i = 0; i < s.qE; ++i) {
    E.push_back({positive_coeff(i, s.d), i == 0 ? random_spd(gen, s.n) : Matrix(0.3 * random_spd(gen, s.n, 0.1))});
  }
  for (int i = 0; i < s.qA; ++i) {
    A.push_back({positive_coeff(i, s.d), random_dissipative(gen, s.n, i == 0 ? 0.5 : 0.1)});
  }
  for (int i = 0; i < s.qB; ++i) B.push_back({any_coeff(i, s.d), randn(gen, s.n, s.m)});
  for (int i = 0; i < s.qC; ++i) C.push_back({any_coeff(i, s.d), randn(gen, s.p, s.n)});
  return ParametricSystem(ParamSepMatrix(E), ParamSepMatrix(A), ParamSepMatrix(B), ParamSepMatrix(C), box);
}

}  // namespace testing_util

#endif  // PARROM_TEST_HELPERS_HPP
