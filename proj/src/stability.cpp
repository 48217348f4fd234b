#include "parrom/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "parrom/errors.hpp"
#include "parrom/mateq.hpp"

namespace parrom {

double spectral_abscissa(const Matrix& A, const Matrix& E) {
  const CVector ev = gen_eigvals(A, E);
  if (ev.size() == 0) return -std::numeric_limits<double>::infinity();
  return ev.real().maxCoeff();
}

namespace {

constexpr Index kGridPerAxis = 33;

Point compass_search(const std::function<double(const Point&)>& f, const ParamBox& box,
                     Point x, double& fx) {
  const Index d = box.dim();
  Vector step = (box.upper() - box.lower()) / static_cast<double>(kGridPerAxis - 1);
  const Vector min_step = 1e-10 * (box.upper() - box.lower());
  while ((step.array() > min_step.array()).any()) {
    bool improved = false;
    for (Index k = 0; k < d && std::isfinite(fx); ++k) {
      for (double sgn : {1.0, -1.0}) {
        Point y = x;
        y[k] = std::clamp(x[k] + sgn * step[k], box.lower()[k], box.upper()[k]);
        if (y[k] == x[k]) continue;
        const double fy = f(y);
        if (!(fy <= fx)) {
          x = y;
          fx = fy;
          improved = true;
          break;
        }
      }
    }
    if (!std::isfinite(fx)) break;
    if (!improved) step *= 0.5;
  }
  return x;
}

}  // namespace

BoxMax maximize_over_box(const std::function<double(const Point&)>& f, const ParamBox& box,
                         const ChebMaxOptions& options) {
  BoxMax out;
  const Index d = box.dim();
  if (d == 1) {
    Point p(1);
    const IntervalMax m = maximize_on_interval(
        [&](double x) {
          p[0] = x;
          return f(p);
        },
        box.lower()[0], box.upper()[0], options);
    out.value = m.value;
    out.argmax = Point::Constant(1, m.argmax);
    out.degree = m.degree;
    out.converged = m.converged;
    return out;
  }

  std::vector<Vector> axes;
  for (Index k = 0; k < d; ++k) {
    axes.push_back(cheb_points(kGridPerAxis - 1, box.lower()[k], box.upper()[k]));
  }
  Index total = 1;
  for (Index k = 0; k < d; ++k) total *= kGridPerAxis;
  std::vector<double> values(static_cast<std::size_t>(total));
  std::vector<Point> points(static_cast<std::size_t>(total));
  for (Index i = 0; i < total; ++i) {
    Point p(d);
    Index rest = i;
    for (Index k = 0; k < d; ++k) {
      p[k] = axes[static_cast<std::size_t>(k)][rest % kGridPerAxis];
      rest /= kGridPerAxis;
    }
    const double v = f(p);
    if (!std::isfinite(v)) {
      out.value = v;
      out.argmax = p;
      out.degree = kGridPerAxis - 1;
      return out;
    }
    values[static_cast<std::size_t>(i)] = v;
    points[static_cast<std::size_t>(i)] = std::move(p);
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t starts = std::min<std::size_t>(5, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(starts),
                    order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  out.value = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < starts; ++s) {
    double fx = values[order[s]];
    const Point x = compass_search(f, box, points[order[s]], fx);
    if (!(fx <= out.value)) {
      out.value = fx;
      out.argmax = x;
    }
    if (!std::isfinite(fx)) break;
  }
  out.degree = kGridPerAxis - 1;
  out.converged = false;
  return out;
}

StabilityReport max_abscissa_over_box(const ParametricSystem& sys, const ChebMaxOptions& options) {
  auto alpha = [&](const Point& p) {
    try {
      const Realization r = sys.at_unchecked(p);
      const double a = spectral_abscissa(r.A, r.E);
      return std::isfinite(a) || a < 0 ? a : std::numeric_limits<double>::infinity();
    } catch (const NumericError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const BoxMax m = maximize_over_box(alpha, sys.domain(), options);
  StabilityReport report;
  report.max_alpha = std::isnan(m.value) ? std::numeric_limits<double>::infinity() : m.value;
  report.argmax_p = m.argmax;
  report.interpolant_degree = m.degree;
  report.converged = m.converged;
  return report;
}

bool is_stable(const ParametricSystem& sys) { return max_abscissa_over_box(sys).max_alpha < 0.0; }

}  // namespace parrom
