#ifndef PARROM_PSYS_HPP
#define PARROM_PSYS_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "parrom/types.hpp"

namespace parrom {

/// Axis-aligned closed box [lower, upper] in R^d.
class ParamBox {
 public:
  ParamBox(Vector lower, Vector upper);

  static ParamBox interval(double lower, double upper);

  Index dim() const { return lower_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  double volume() const;
  Point center() const { return 0.5 * (lower_ + upper_); }

  bool contains(const Point& p, double tol = 0.0) const;

  bool operator==(const ParamBox& other) const {
    return lower_ == other.lower_ && upper_ == other.upper_;
  }

 private:
  Vector lower_;
  Vector upper_;
};

/// A scalar function of the parameter. Closed set of kinds plus a user
/// callable identified by a tag.
class ScalarCoeff {
 public:
  enum class Kind { constant, monomial, rational_shift, custom };
  using Function = std::function<double(const Point&)>;

  /// p -> value
  static ScalarCoeff constant(double value = 1.0);
  /// p -> prod_k p_k^exponents[k]
  static ScalarCoeff monomial(std::vector<int> exponents);
  /// p -> p_axis, shorthand for a degree-1 monomial in a d-dimensional box.
  static ScalarCoeff linear(int axis = 0, int dim = 1);
  /// p -> 1 / (p_axis - pole)
  static ScalarCoeff rational_shift(int axis, double pole);
  static ScalarCoeff custom(std::string tag, Function fn);

  double operator()(const Point& p) const;

  Kind kind() const { return kind_; }
  double value() const { return value_; }
  const std::vector<int>& exponents() const { return exponents_; }
  int axis() const { return axis_; }
  double pole() const { return value_; }
  const std::string& tag() const { return tag_; }

  bool is_constant() const;

  /// Structural equality. Custom callables never compare equal, so terms
  /// carrying them are never merged.
  bool mergeable_with(const ScalarCoeff& other) const;

  /// Checks the function is defined (finite) on the whole box.
  void validate_on(const ParamBox& box) const;

  std::string describe() const;

 private:
  ScalarCoeff() = default;

  Kind kind_ = Kind::constant;
  double value_ = 1.0;
  std::vector<int> exponents_;
  int axis_ = 0;
  std::string tag_;
  std::shared_ptr<const Function> fn_;
};

/// Process-wide registry of named custom coefficient functions, used when a
/// system is deserialized.
class CoeffRegistry {
 public:
  static void add(const std::string& tag, ScalarCoeff::Function fn);
  static ScalarCoeff lookup(const std::string& tag);
};

struct Term {
  ScalarCoeff coeff;
  Matrix matrix;
};

/// Matrix-valued function sum_i f_i(p) M_i.
class ParamSepMatrix {
 public:
  explicit ParamSepMatrix(std::vector<Term> terms);

  static ParamSepMatrix constant(Matrix m);
  /// M1 + p_axis * M2
  static ParamSepMatrix affine(Matrix m1, Matrix m2, int axis = 0, int dim = 1);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& term(std::size_t i) const { return terms_[i]; }

  /// Evaluates without any domain check.
  Matrix operator()(const Point& p) const;

  /// Same coefficient functions, new constant matrices.
  ParamSepMatrix with_matrices(std::vector<Matrix> matrices) const;

  /// Merges terms with structurally equal coefficients.
  ParamSepMatrix merged() const;

  bool has_constant_coefficients() const;

 private:
  std::vector<Term> terms_;
  Index rows_ = 0;
  Index cols_ = 0;
};

/// Constant (non-parametric) realization E x' = A x + B u, y = C x.
struct Realization {
  Matrix E, A, B, C;
};

/// E(p) x' = A(p) x + B(p) u, y = C(p) x over a parameter box.
class ParametricSystem {
 public:
  ParametricSystem(ParamSepMatrix E, ParamSepMatrix A, ParamSepMatrix B,
                   ParamSepMatrix C, ParamBox domain);

  /// Non-parametric system promoted to the given box.
  static ParametricSystem constant(const Realization& r, ParamBox domain);

  Index order() const { return A_.rows(); }
  Index inputs() const { return B_.cols(); }
  Index outputs() const { return C_.rows(); }
  const ParamBox& domain() const { return domain_; }

  const ParamSepMatrix& E() const { return E_; }
  const ParamSepMatrix& A() const { return A_; }
  const ParamSepMatrix& B() const { return B_; }
  const ParamSepMatrix& C() const { return C_; }

  /// Evaluates all four matrices at p; throws DomainError outside the box.
  Realization at(const Point& p) const;
  /// As at() but without the domain check.
  Realization at_unchecked(const Point& p) const;

  bool is_nonparametric() const;

  ParametricSystem with_domain(ParamBox domain) const;

 private:
  ParamSepMatrix E_, A_, B_, C_;
  ParamBox domain_;
};

Matrix eval_matrix(const ParamSepMatrix& m, const ParamBox& box, const Point& p);

/// C(p) (sE(p) - A(p))^{-1} B(p)
CMatrix transfer_eval(const ParametricSystem& sys, Complex s, const Point& p);
CMatrix transfer_eval(const Realization& r, Complex s);

/// Block realization of H - Hhat with merged coefficient functions.
ParametricSystem error_system(const ParametricSystem& fom, const ParametricSystem& rom);

CVector poles(const ParametricSystem& sys, const Point& p);

}  // namespace parrom

#endif  // PARROM_PSYS_HPP
