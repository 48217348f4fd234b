#ifndef PARROM_GRAD_HPP
#define PARROM_GRAD_HPP

#include <string>
#include <utility>
#include <vector>

#include "parrom/gramians.hpp"

namespace parrom {

/// One gradient matrix per coefficient matrix of the ROM, same shapes.
struct GradientSet {
  std::vector<Matrix> dE, dA, dB, dC;

  static GradientSet zeros_like(const ParametricSystem& rom);
  double norm() const;
};

struct ObjectiveGrad {
  double value = 0.0;
  GradientSet grad;
  QuadResult quad;
};

/// Reduced objective and its gradient with respect to every ROM coefficient
/// matrix, from a single quadrature pass. Any pointwise failure yields
/// value = +inf and a zero gradient.
ObjectiveGrad gradient(const ParametricSystem& fom, const ParametricSystem& rom,
                       const QuadSpec& spec = {});

/// Frobenius norms of the first-order optimality residuals (gradient / 2),
/// labelled E1, E2, ..., A1, ..., B1, ..., C1, ...
std::vector<std::pair<std::string, double>> fonc_residuals(const ParametricSystem& fom,
                                                           const ParametricSystem& rom,
                                                           const QuadSpec& spec = {});
std::vector<std::pair<std::string, double>> fonc_residuals(const GradientSet& grad);

/// Gradient of the squared H2 error for constant systems, with respect to
/// Eh, Ah, Bh, Ch (one matrix per family).
GradientSet nonparametric_gradient(const Realization& fom, const Realization& rom);

}  // namespace parrom

#endif  // PARROM_GRAD_HPP
