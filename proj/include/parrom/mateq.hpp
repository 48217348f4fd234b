#ifndef PARROM_MATEQ_HPP
#define PARROM_MATEQ_HPP

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "parrom/errors.hpp"
#include "parrom/log.hpp"

/// Dense solvers for generalized Lyapunov and Sylvester equations.
///
/// Sign conventions follow the Gramian equations:
///
///   controllability:   A X E^T + E X A^T + R = 0
///   observability:     A^T X E + E^T X A + R = 0
///   mixed:             A X Ehat^T + E X Ahat^T + M = 0
///   mixed, transposed: A^T X Ehat + E^T X Ahat + N = 0
///
/// The pencil (A, E) is reduced to standard form through an LU factorization
/// of E, then to upper Hessenberg form. The small pencil (Ahat, Ehat) is
/// reduced by a real QZ decomposition, after which every column of the
/// solution costs one shifted Hessenberg solve.
namespace parrom {

enum class LyapSide { controllability, observability };

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace detail {

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// LU factorization of t*H + s*I for upper Hessenberg H, using adjacent row
/// interchanges. O(n^2).
template <typename T>
class HessenbergLU {
 public:
  template <typename Real>
  HessenbergLU(const MatrixX<Real>& H, T t, T s)
      : u_(H.template cast<T>() * t), mult_(H.rows() > 0 ? H.rows() - 1 : 0),
        swapped_(H.rows() > 0 ? H.rows() - 1 : 0, false) {
    using std::abs;
    const Index n = u_.rows();
    u_.diagonal().array() += s;
    const auto scale = u_.cwiseAbs().maxCoeff();
    for (Index k = 0; k + 1 < n; ++k) {
      if (abs(u_(k + 1, k)) > abs(u_(k, k))) {
        u_.row(k).tail(n - k).swap(u_.row(k + 1).tail(n - k));
        swapped_[k] = true;
      }
      if (u_(k, k) == T(0)) {
        mult_[k] = T(0);
        continue;
      }
      const T l = u_(k + 1, k) / u_(k, k);
      mult_[k] = l;
      u_.row(k + 1).tail(n - k) -= l * u_.row(k).tail(n - k);
    }
    using RealT = typename Eigen::NumTraits<T>::Real;
    const RealT tiny = Eigen::NumTraits<RealT>::epsilon() * static_cast<RealT>(n) * scale;
    for (Index k = 0; k < n; ++k) {
      if (!(abs(u_(k, k)) > tiny)) {
        singular_ = true;
        break;
      }
    }
  }

  bool singular() const { return singular_; }

  template <typename Vec>
  void solve_in_place(Vec& b) const {
    const Index n = u_.rows();
    for (Index k = 0; k + 1 < n; ++k) {
      if (swapped_[k]) std::swap(b(k), b(k + 1));
      b(k + 1) -= mult_[k] * b(k);
    }
    u_.template triangularView<Eigen::Upper>().solveInPlace(b);
  }

 private:
  MatrixX<T> u_;
  std::vector<T> mult_;
  std::vector<bool> swapped_;
  bool singular_ = false;
};

/// Solves H Y T^T + Y S^T + G = 0 where H is n x n upper Hessenberg, S is
/// r x r quasi upper-triangular and T is r x r upper triangular. Columns are
/// resolved from last to first; 2x2 diagonal blocks of S are decoupled by a
/// complex 2x2 eigendecomposition so each conjugate pair needs one complex
/// shifted solve.
template <typename Scalar>
MatrixX<Scalar> hessenberg_sylvester(const MatrixX<Scalar>& H, const MatrixX<Scalar>& S,
                                     const MatrixX<Scalar>& T, const MatrixX<Scalar>& G,
                                     bool t_is_identity = false) {
  using Cplx = std::complex<Scalar>;
  using Mat = MatrixX<Scalar>;
  using Vec = VectorX<Scalar>;
  const Index n = H.rows();
  const Index r = S.rows();
  Mat Y = Mat::Zero(n, r);
  Mat HY = Mat::Zero(n, r);

  auto rhs_for = [&](Index c, Index first_solved) -> Vec {
    Vec rhs = -G.col(c);
    const Index tail = r - first_solved;
    if (tail > 0) {
      if (!t_is_identity) {
        rhs.noalias() -= HY.rightCols(tail) * T.row(c).tail(tail).transpose();
      }
      rhs.noalias() -= Y.rightCols(tail) * S.row(c).tail(tail).transpose();
    }
    return rhs;
  };

  Index j = r - 1;
  while (j >= 0) {
    const bool pair = j > 0 && S(j, j - 1) != Scalar(0);
    if (!pair) {
      const Scalar tjj = T(j, j);
      if (tjj == Scalar(0)) throw MatEqFailure("singular small pencil (infinite eigenvalue)");
      Vec rhs = rhs_for(j, j + 1);
      HessenbergLU<Scalar> lu(H, tjj, S(j, j));
      if (lu.singular()) {
        throw MatEqFailure("singular shifted system in Sylvester solve (spectra overlap)");
      }
      lu.solve_in_place(rhs);
      Y.col(j) = rhs;
      HY.col(j).noalias() = H * rhs;
      j -= 1;
      continue;
    }

    const Index b = j - 1;
    Mat R(n, 2);
    R.col(0) = rhs_for(b, j + 1);
    R.col(1) = rhs_for(j, j + 1);
    const Eigen::Matrix<Scalar, 2, 2> TJ = T.template block<2, 2>(b, b);
    const Eigen::Matrix<Scalar, 2, 2> SJ = S.template block<2, 2>(b, b);
    if (TJ(0, 0) == Scalar(0) || TJ(1, 1) == Scalar(0)) {
      throw MatEqFailure("singular small pencil (infinite eigenvalue)");
    }
    // H W TJ^T + W SJ^T = R  ->  H W + W Rt = R TJ^{-T},  Rt = (TJ^{-1} SJ)^T
    const Eigen::Matrix<Scalar, 2, 2> TJinvT = TJ.inverse().transpose();
    const Eigen::Matrix<Scalar, 2, 2> Rt = SJ.transpose() * TJinvT;
    const Scalar half_tr = Scalar(0.5) * (Rt(0, 0) + Rt(1, 1));
    const Scalar disc = half_tr * half_tr - (Rt(0, 0) * Rt(1, 1) - Rt(0, 1) * Rt(1, 0));
    Mat W(n, 2);
    if (disc < Scalar(0)) {
      using std::sqrt;
      const Cplx lambda(half_tr, sqrt(-disc));
      Eigen::Matrix<Cplx, 2, 1> v;
      if (Rt(0, 1) != Scalar(0)) {
        v << Cplx(Rt(0, 1)), lambda - Rt(0, 0);
      } else {
        v << lambda - Rt(1, 1), Cplx(Rt(1, 0));
      }
      Eigen::Matrix<Cplx, 2, 2> Vd;
      Vd.col(0) = v;
      Vd.col(1) = v.conjugate();
      const MatrixX<Cplx> F = (R * TJinvT).template cast<Cplx>() * Vd;
      HessenbergLU<Cplx> lu(H, Cplx(1), lambda);
      if (lu.singular()) {
        throw MatEqFailure("singular shifted system in Sylvester solve (spectra overlap)");
      }
      VectorX<Cplx> z = F.col(0);
      lu.solve_in_place(z);
      MatrixX<Cplx> Z(n, 2);
      Z.col(0) = z;
      Z.col(1) = z.conjugate();
      W = (Z * Vd.inverse()).real();
    } else {
      // Real eigenvalues in a 2x2 block: solve the coupled 2n system directly.
      Mat big(2 * n, 2 * n);
      const Mat I = Mat::Identity(n, n);
      for (int a = 0; a < 2; ++a) {
        for (int c = 0; c < 2; ++c) {
          big.block(a * n, c * n, n, n) = TJ(a, c) * H + SJ(a, c) * I;
        }
      }
      Vec rhs(2 * n);
      rhs << R.col(0), R.col(1);
      Eigen::FullPivLU<Mat> lu(big);
      if (!lu.isInvertible()) throw MatEqFailure("singular coupled 2x2-block system");
      const Vec w = lu.solve(rhs);
      W.col(0) = w.head(n);
      W.col(1) = w.tail(n);
    }
    Y.col(b) = W.col(0);
    Y.col(j) = W.col(1);
    HY.col(b).noalias() = H * W.col(0);
    HY.col(j).noalias() = H * W.col(1);
    j -= 2;
  }
  return Y;
}

template <typename Scalar>
MatrixX<Scalar> flip_transpose(const MatrixX<Scalar>& M) {
  return M.transpose().colwise().reverse().rowwise().reverse();
}

inline void check_finite(bool finite, const char* what) {
  if (!finite) throw MatEqFailure(std::string("non-finite entries in solution of ") + what);
}

}  // namespace detail

/// The pencil (A, E) of the large side, factored once so that several mixed
/// Sylvester equations sharing it are solved for O(n^2 r) each.
namespace detail {

/// Solves E^T X = Z from a partial-pivoting LU of E.
template <typename Mat>
Mat lu_solve_transposed(const Eigen::PartialPivLU<Mat>& lu, const Mat& Z) {
  Mat Y = lu.matrixLU().template triangularView<Eigen::Upper>().transpose().solve(Z);
  Y = lu.matrixLU().template triangularView<Eigen::UnitLower>().transpose().solve(Y);
  return lu.permutationP().transpose() * Y;
}

}  // namespace detail

template <typename Scalar = double>
class ShiftedPencil {
 public:
  using Mat = MatrixX<Scalar>;

  ShiftedPencil() = default;

  template <typename DA, typename DE>
  ShiftedPencil(const Eigen::MatrixBase<DA>& A, const Eigen::MatrixBase<DE>& E) {
    const Index n = A.rows();
    if (A.cols() != n || E.rows() != n || E.cols() != n) {
      throw DimensionError("ShiftedPencil: A and E must be square of equal size");
    }
    identity_E_ = E.isIdentity(0);
    Mat K;
    if (identity_E_) {
      K = A;
    } else {
      lu_E_.compute(E);
      rcond_ = static_cast<double>(lu_E_.rcond());
      if (!(rcond_ > static_cast<double>(Eigen::NumTraits<Scalar>::epsilon()))) {
        throw ConditionError("E is singular to working precision", rcond_);
      }
      if (rcond_ < 1e-12) warn("ill-conditioned E, rcond = " + std::to_string(rcond_));
      K = lu_E_.solve(A);
    }
    if (!K.allFinite()) throw MatEqFailure("non-finite pencil");
    Eigen::HessenbergDecomposition<Mat> hd(K);
    H_ = hd.matrixH();
    U_ = hd.matrixQ();
    H_flip_ = detail::flip_transpose(H_);
  }

  Index size() const { return H_.rows(); }
  double rcond_E() const { return rcond_; }

  /// Solves A X Ehat^T + E X Ahat^T + M = 0.
  Mat solve_sylvester(const Mat& Ahat, const Mat& Ehat, const Mat& M) const {
    check_small(Ahat, Ehat, M.cols());
    const Mat F = U_.transpose() * apply_E_inv(M);
    Eigen::RealQZ<Mat> qz(Ahat, Ehat);
    if (qz.info() != Eigen::Success) throw MatEqFailure("QZ of the small pencil failed");
    const Mat W = detail::hessenberg_sylvester<Scalar>(H_, qz.matrixS(), qz.matrixT(),
                                                       F * qz.matrixQ());
    Mat X = U_ * (W * qz.matrixZ());
    detail::check_finite(X.allFinite(), "mixed Sylvester equation");
    return X;
  }

  /// Solves A^T X Ehat + E^T X Ahat + N = 0. When et_x is given it receives
  /// E^T X, which the caller often needs anyway.
  Mat solve_sylvester_transposed(const Mat& Ahat, const Mat& Ehat, const Mat& N,
                                 Mat* et_x = nullptr) const {
    check_small(Ahat, Ehat, N.cols());
    // With Z = E^T X and K = E^{-1} A = U H U^T:  K^T Z Ehat + Z Ahat + N = 0.
    // Reversing the row order turns H^T into an upper Hessenberg matrix.
    const Mat G = (U_.transpose() * N).colwise().reverse();
    Eigen::RealQZ<Mat> qz(Ahat.transpose(), Ehat.transpose());
    if (qz.info() != Eigen::Success) throw MatEqFailure("QZ of the small pencil failed");
    const Mat W = detail::hessenberg_sylvester<Scalar>(H_flip_, qz.matrixS(), qz.matrixT(),
                                                       G * qz.matrixQ());
    const Mat Z = U_ * (W * qz.matrixZ()).colwise().reverse();
    Mat X = identity_E_ ? Z : detail::lu_solve_transposed(lu_E_, Z);
    detail::check_finite(X.allFinite(), "transposed mixed Sylvester equation");
    if (et_x) *et_x = Z;
    return X;
  }

 private:
  Mat apply_E_inv(const Mat& M) const { return identity_E_ ? M : Mat(lu_E_.solve(M)); }

  void check_small(const Mat& Ahat, const Mat& Ehat, Index cols) const {
    const Index r = Ahat.rows();
    if (Ahat.cols() != r || Ehat.rows() != r || Ehat.cols() != r || cols != r) {
      throw DimensionError("Sylvester solve: inconsistent small-side dimensions");
    }
  }

  bool identity_E_ = true;
  double rcond_ = 1.0;
  Eigen::PartialPivLU<Mat> lu_E_;
  Mat H_, H_flip_, U_;
};

struct LyapProblem {
  Matrix A, E, rhs;
  LyapSide side = LyapSide::controllability;
};

struct SylvProblem {
  Matrix A, E, Ahat, Ehat, M;
  bool transposed = false;
};

/// Generalized Lyapunov equation, see the conventions at the top of this
/// header. The result is symmetrized.
template <typename DA, typename DE, typename DR>
MatrixX<typename DA::Scalar> solve_lyap(const Eigen::MatrixBase<DA>& A,
                                        const Eigen::MatrixBase<DE>& E,
                                        const Eigen::MatrixBase<DR>& rhs,
                                        LyapSide side = LyapSide::controllability) {
  using Scalar = typename DA::Scalar;
  using Mat = MatrixX<Scalar>;
  const Index n = A.rows();
  if (A.cols() != n || E.rows() != n || E.cols() != n || rhs.rows() != n || rhs.cols() != n) {
    throw DimensionError("solve_lyap: inconsistent dimensions");
  }
  if (n == 0) return Mat(0, 0);
  const bool identity_E = E.isIdentity(0);
  Eigen::PartialPivLU<Mat> lu;
  Mat K;
  if (identity_E) {
    K = A;
  } else {
    lu.compute(E);
    const double rc = static_cast<double>(lu.rcond());
    if (!(rc > static_cast<double>(Eigen::NumTraits<Scalar>::epsilon()))) {
      throw ConditionError("E is singular to working precision", rc);
    }
    if (rc < 1e-12) warn("ill-conditioned E, rcond = " + std::to_string(rc));
    K = lu.solve(A);
  }
  if (!K.allFinite() || !rhs.allFinite()) throw MatEqFailure("non-finite Lyapunov data");
  Eigen::RealSchur<Mat> schur(K);
  if (schur.info() != Eigen::Success) throw MatEqFailure("real Schur decomposition failed");
  const Mat& U = schur.matrixU();
  const Mat& T = schur.matrixT();
  const Mat I = Mat::Identity(n, n);
  Mat X;
  if (side == LyapSide::controllability) {
    // K X + X K^T + E^{-1} R E^{-T} = 0
    Mat F = identity_E ? Mat(rhs) : Mat(lu.solve(rhs));
    if (!identity_E) F = lu.solve(F.transpose().eval()).transpose();
    const Mat G = U.transpose() * F * U;
    const Mat Y = detail::hessenberg_sylvester<Scalar>(T, T, I, G, true);
    X = U * Y * U.transpose();
  } else {
    // Y = E^T X E:  K^T Y + Y K + R = 0, flipped into controllability form.
    const Mat Tf = detail::flip_transpose(T);
    const Mat G = (U.transpose() * rhs * U).reverse();
    const Mat Yf = detail::hessenberg_sylvester<Scalar>(Tf, Tf, I, G, true);
    Mat Y = U * Yf.reverse() * U.transpose();
    if (!identity_E) {
      Y = detail::lu_solve_transposed(lu, Y);
      Y = detail::lu_solve_transposed(lu, Mat(Y.transpose())).transpose();
    }
    X = Y;
  }
  detail::check_finite(X.allFinite(), "Lyapunov equation");
  return Mat(Scalar(0.5) * (X + X.transpose()));
}

inline Matrix solve_lyap(const LyapProblem& prob) {
  return solve_lyap(prob.A, prob.E, prob.rhs, prob.side);
}

/// Mixed Sylvester equation; transposed selects A^T X Ehat + E^T X Ahat + M = 0.
template <typename DA, typename DE, typename DAh, typename DEh, typename DM>
MatrixX<typename DA::Scalar> solve_sylv(const Eigen::MatrixBase<DA>& A,
                                        const Eigen::MatrixBase<DE>& E,
                                        const Eigen::MatrixBase<DAh>& Ahat,
                                        const Eigen::MatrixBase<DEh>& Ehat,
                                        const Eigen::MatrixBase<DM>& M, bool transposed = false) {
  using Scalar = typename DA::Scalar;
  using Mat = MatrixX<Scalar>;
  if (M.rows() != A.rows()) throw DimensionError("solve_sylv: M rows must match A");
  ShiftedPencil<Scalar> pencil(A, E);
  return transposed ? pencil.solve_sylvester_transposed(Mat(Ahat), Mat(Ehat), Mat(M))
                    : pencil.solve_sylvester(Mat(Ahat), Mat(Ehat), Mat(M));
}

inline Matrix solve_sylv(const SylvProblem& prob) {
  return solve_sylv(prob.A, prob.E, prob.Ahat, prob.Ehat, prob.M, prob.transposed);
}

/// Eigenvalues of the pencil lambda E - A via E^{-1} A.
template <typename DA, typename DE>
Eigen::Matrix<std::complex<typename DA::Scalar>, Eigen::Dynamic, 1> gen_eigvals(
    const Eigen::MatrixBase<DA>& A, const Eigen::MatrixBase<DE>& E) {
  using Scalar = typename DA::Scalar;
  using Mat = MatrixX<Scalar>;
  const Index n = A.rows();
  if (A.cols() != n || E.rows() != n || E.cols() != n) {
    throw DimensionError("gen_eigvals: A and E must be square of equal size");
  }
  Mat K;
  if (E.isIdentity(0)) {
    K = A;
  } else {
    Eigen::PartialPivLU<Mat> lu(E);
    const double rc = static_cast<double>(lu.rcond());
    if (!(rc > static_cast<double>(Eigen::NumTraits<Scalar>::epsilon()))) {
      throw ConditionError("E is singular to working precision", rc);
    }
    K = lu.solve(A);
  }
  if (!K.allFinite()) throw NumericError("gen_eigvals: non-finite pencil");
  Eigen::EigenSolver<Mat> es(K, false);
  if (es.info() != Eigen::Success) throw NumericError("gen_eigvals: eigenvalue iteration failed");
  return es.eigenvalues();
}

}  // namespace parrom

#endif  // PARROM_MATEQ_HPP
