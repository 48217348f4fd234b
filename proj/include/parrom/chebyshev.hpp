#ifndef PARROM_CHEBYSHEV_HPP
#define PARROM_CHEBYSHEV_HPP

#include <functional>
#include <vector>

#include "parrom/types.hpp"

namespace parrom {

/// Chebyshev series sum_k c_k T_k(x) on [a, b].
class ChebSeries {
 public:
  ChebSeries() = default;
  ChebSeries(Vector coeffs, double a, double b);

  /// Interpolant through values at the second-kind points x_j = cos(j pi / N),
  /// j = 0..N, mapped to [a, b] (values[0] sits at b).
  static ChebSeries from_values(const Vector& values, double a, double b);

  double operator()(double x) const;
  ChebSeries derivative() const;
  /// Real roots inside [a, b] from the eigenvalues of the colleague matrix.
  std::vector<double> roots() const;

  Index degree() const { return coeffs_.size() - 1; }
  const Vector& coeffs() const { return coeffs_; }
  double a() const { return a_; }
  double b() const { return b_; }

 private:
  Vector coeffs_;
  double a_ = -1.0;
  double b_ = 1.0;
};

/// Second-kind Chebyshev points on [a, b], descending from b to a.
Vector cheb_points(Index n, double a, double b);

struct IntervalMax {
  double value = 0.0;
  double argmax = 0.0;
  Index degree = 0;
  bool converged = false;
  int evaluations = 0;
};

struct ChebMaxOptions {
  Index min_degree = 16;
  Index max_degree = 4096;
  double tail_tol = 1e-10;
  int fallback_samples = 1024;
};

/// Global maximum of a continuous function on [a, b]. Builds an adaptive
/// Chebyshev interpolant by degree doubling; when its coefficient tail
/// decays, the extrema are the roots of the derivative series, each checked
/// against f itself. Otherwise falls back to dense uniform sampling refined
/// by golden-section search. A non-finite sample ends the search with that
/// value.
IntervalMax maximize_on_interval(const std::function<double(double)>& f, double a, double b,
                                 const ChebMaxOptions& options = {});

/// Golden-section search for a local maximum of f on [lo, hi].
double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double& argmax, int iterations = 60);

}  // namespace parrom

#endif  // PARROM_CHEBYSHEV_HPP
