#ifndef PARROM_STABILITY_HPP
#define PARROM_STABILITY_HPP

#include <functional>

#include "parrom/chebyshev.hpp"
#include "parrom/psys.hpp"

namespace parrom {

/// Largest real part of the eigenvalues of the pencil (A, E).
double spectral_abscissa(const Matrix& A, const Matrix& E);

struct StabilityReport {
  double max_alpha = 0.0;
  Point argmax_p;
  Index interpolant_degree = 0;
  bool converged = false;
};

struct BoxMax {
  double value = 0.0;
  Point argmax;
  Index degree = 0;
  bool converged = false;
};

/// Global maximum of f over a box. One-dimensional boxes use the Chebyshev
/// interpolation search; higher dimensions a 33-point tensor Chebyshev grid
/// followed by compass search from the five best grid points (converged is
/// then always false).
BoxMax maximize_over_box(const std::function<double(const Point&)>& f, const ParamBox& box,
                         const ChebMaxOptions& options = {});

/// max over the box of the spectral abscissa of (A(p), E(p)). Points where
/// the abscissa cannot be computed count as +inf.
StabilityReport max_abscissa_over_box(const ParametricSystem& sys,
                                      const ChebMaxOptions& options = {});

bool is_stable(const ParametricSystem& sys);

}  // namespace parrom

#endif  // PARROM_STABILITY_HPP
