#ifndef PARROM_QUAD_HPP
#define PARROM_QUAD_HPP

#include <functional>
#include <vector>

#include "parrom/psys.hpp"

namespace parrom {

/// How integrals over the parameter box are computed.
struct QuadSpec {
  enum class Mode { adaptive, tensor, discrete };

  Mode mode = Mode::adaptive;
  double abs_tol = 1e-10;
  double rel_tol = 1e-6;
  int max_panels = 2000;
  /// Gauss-Legendre nodes per axis in tensor mode.
  int nodes = 8;
  /// Dirac points (unit weights) in discrete mode.
  std::vector<Point> points;

  static QuadSpec adaptive(double abs_tol = 1e-10, double rel_tol = 1e-6, int max_panels = 2000);
  static QuadSpec tensor(int nodes_per_axis);
  static QuadSpec discrete(std::vector<Point> points);

  void validate(const ParamBox& box) const;
};

struct QuadResult {
  Vector value;
  /// Componentwise error estimate (zero for tensor and discrete modes).
  Vector error;
  int evaluations = 0;
  int panels = 0;
  /// The panel cap was hit before the tolerance was met.
  bool capped = false;
};

using Integrand = std::function<Vector(const Point&)>;

/// Integrates a vector-valued function over the box. All components share
/// the same evaluation points. Adaptive mode uses tensor Gauss-Kronrod
/// (7/15) panels and bisects the panel with the largest scaled error along
/// its worst axis until every component meets max(abs_tol, rel_tol*|value|).
QuadResult integrate(const Integrand& f, Index length, const ParamBox& box, const QuadSpec& spec);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace parrom

#endif  // PARROM_QUAD_HPP
