#include "parrom/quad.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "parrom/errors.hpp"
#include "parrom/log.hpp"
#include "parrom/parallel.hpp"

namespace parrom {

QuadSpec QuadSpec::adaptive(double abs_tol, double rel_tol, int max_panels) {
  QuadSpec s;
  s.mode = Mode::adaptive;
  s.abs_tol = abs_tol;
  s.rel_tol = rel_tol;
  s.max_panels = max_panels;
  return s;
}

QuadSpec QuadSpec::tensor(int nodes_per_axis) {
  QuadSpec s;
  s.mode = Mode::tensor;
  s.nodes = nodes_per_axis;
  return s;
}

QuadSpec QuadSpec::discrete(std::vector<Point> points) {
  QuadSpec s;
  s.mode = Mode::discrete;
  s.points = std::move(points);
  return s;
}

void QuadSpec::validate(const ParamBox& box) const {
  switch (mode) {
    case Mode::adaptive:
      if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ConfigError("quadrature tolerances must be > 0");
      if (max_panels < 1) throw ConfigError("max_panels must be >= 1");
      break;
    case Mode::tensor:
      if (nodes < 1) throw ConfigError("tensor quadrature needs at least one node per axis");
      break;
    case Mode::discrete:
      if (points.empty()) throw ConfigError("discrete measure needs at least one point");
      for (const auto& p : points) {
        if (!box.contains(p)) throw DomainError("discrete quadrature point outside the box");
      }
      break;
  }
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  // Legendre P_n and its derivative by the three-term recurrence.
  auto legendre = [n](double x, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      const double dx = legendre(x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
struct GaussKronrod15 {
  std::array<double, 15> x{};
  std::array<double, 15> wk{};
  std::array<double, 15> wg{};

  GaussKronrod15() {
    constexpr std::array<double, 8> xgk = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    constexpr std::array<double, 8> wgk = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    constexpr std::array<double, 4> wg7 = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
    for (int i = 0; i < 7; ++i) {
      x[static_cast<std::size_t>(i)] = -xgk[static_cast<std::size_t>(i)];
      x[static_cast<std::size_t>(14 - i)] = xgk[static_cast<std::size_t>(i)];
      wk[static_cast<std::size_t>(i)] = wk[static_cast<std::size_t>(14 - i)] =
          wgk[static_cast<std::size_t>(i)];
      const double g = (i % 2 == 1) ? wg7[static_cast<std::size_t>(i / 2)] : 0.0;
      wg[static_cast<std::size_t>(i)] = wg[static_cast<std::size_t>(14 - i)] = g;
    }
    x[7] = 0.0;
    wk[7] = wgk[7];
    wg[7] = wg7[3];
  }
};

const GaussKronrod15& gk15() {
  static const GaussKronrod15 rule;
  return rule;
}

struct Panel {
  Vector lower, upper;
  Vector value, error;
  Eigen::MatrixXd axis_error;  // length x d
};

void check_finite(const Vector& v, const Point& p, Index length) {
  if (v.size() != length) throw DimensionError("integrand returned a vector of the wrong length");
  if (!v.allFinite()) throw IntegrandFailure("non-finite integrand value", p);
}

// Evaluates f on a tensor grid given by per-axis node lists; returns values
// in row-major multi-index order.
std::vector<Vector> eval_grid(const Integrand& f, Index length,
                              const std::vector<std::vector<double>>& axis_nodes) {
  const std::size_t d = axis_nodes.size();
  std::size_t total = 1;
  for (const auto& a : axis_nodes) total *= a.size();
  std::vector<Vector> values(total);
  parallel_for(total, [&](std::size_t flat) {
    Point p(static_cast<Index>(d));
    std::size_t rem = flat;
    for (std::size_t k = d; k-- > 0;) {
      const std::size_t m = axis_nodes[k].size();
      p[static_cast<Index>(k)] = axis_nodes[k][rem % m];
      rem /= m;
    }
    Vector v = f(p);
    check_finite(v, p, length);
    values[flat] = std::move(v);
  });
  return values;
}

Panel eval_panel(const Integrand& f, Index length, Vector lower, Vector upper, int& evaluations) {
  const auto& rule = gk15();
  const Index d = lower.size();
  const Vector center = 0.5 * (lower + upper);
  const Vector half = 0.5 * (upper - lower);
  std::vector<std::vector<double>> nodes(static_cast<std::size_t>(d));
  for (Index k = 0; k < d; ++k) {
    for (double x : rule.x) nodes[static_cast<std::size_t>(k)].push_back(center[k] + half[k] * x);
  }
  const auto values = eval_grid(f, length, nodes);
  evaluations += static_cast<int>(values.size());

  Panel panel;
  panel.value = Vector::Zero(length);
  Vector gauss = Vector::Zero(length);
  panel.axis_error = Eigen::MatrixXd::Zero(length, d);
  const double jac = half.prod();
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    std::size_t rem = flat;
    for (Index k = d; k-- > 0;) {
      idx[static_cast<std::size_t>(k)] = static_cast<int>(rem % 15);
      rem /= 15;
    }
    double wk = 1.0, wg = 1.0;
    for (Index k = 0; k < d; ++k) {
      wk *= rule.wk[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
      wg *= rule.wg[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
    }
    panel.value.noalias() += wk * values[flat];
    if (wg != 0.0) gauss.noalias() += wg * values[flat];
    if (d > 1) {
      for (Index k = 0; k < d; ++k) {
        const auto i = static_cast<std::size_t>(idx[static_cast<std::size_t>(k)]);
        const double wk_k = rule.wk[i];
        const double mixed = wk / wk_k * (wk_k - rule.wg[i]);
        panel.axis_error.col(k).noalias() += mixed * values[flat];
      }
    }
  }
  panel.value *= jac;
  gauss *= jac;
  panel.error = (panel.value - gauss).cwiseAbs();
  if (d > 1) {
    panel.axis_error = (panel.axis_error * jac).cwiseAbs();
  } else {
    panel.axis_error.col(0) = panel.error;
  }
  panel.lower = std::move(lower);
  panel.upper = std::move(upper);
  return panel;
}

QuadResult integrate_adaptive(const Integrand& f, Index length, const ParamBox& box,
                              const QuadSpec& spec) {
  QuadResult result;
  std::vector<Panel> panels;
  panels.push_back(eval_panel(f, length, box.lower(), box.upper(), result.evaluations));
  for (;;) {
    Vector value = Vector::Zero(length);
    Vector error = Vector::Zero(length);
    for (const auto& p : panels) {
      value += p.value;
      error += p.error;
    }
    const Vector tol = (spec.rel_tol * value.cwiseAbs()).cwiseMax(spec.abs_tol);
    result.value = value;
    result.error = error;
    result.panels = static_cast<int>(panels.size());
    if ((error.array() <= tol.array()).all()) break;
    if (static_cast<int>(panels.size()) >= spec.max_panels) {
      result.capped = true;
      warn("quadrature panel cap reached before meeting the tolerance");
      break;
    }
    std::size_t worst = 0;
    double worst_score = -1.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      const double score = (panels[i].error.array() / tol.array()).maxCoeff();
      if (score > worst_score) {
        worst_score = score;
        worst = i;
      }
    }
    Panel target = std::move(panels[worst]);
    panels.erase(panels.begin() + static_cast<std::ptrdiff_t>(worst));
    Index axis = 0;
    if (target.axis_error.cols() > 1) {
      Eigen::VectorXd axis_score(target.axis_error.cols());
      for (Index k = 0; k < target.axis_error.cols(); ++k) {
        axis_score[k] = (target.axis_error.col(k).array() / tol.array()).maxCoeff();
      }
      axis_score.maxCoeff(&axis);
    }
    const double mid = 0.5 * (target.lower[axis] + target.upper[axis]);
    Vector left_upper = target.upper;
    left_upper[axis] = mid;
    Vector right_lower = target.lower;
    right_lower[axis] = mid;
    // Insert children at the parent's position so the summation order only
    // depends on the panel tree.
    Panel left = eval_panel(f, length, target.lower, left_upper, result.evaluations);
    Panel right = eval_panel(f, length, right_lower, target.upper, result.evaluations);
    auto pos = panels.begin() + static_cast<std::ptrdiff_t>(worst);
    pos = panels.insert(pos, std::move(right));
    panels.insert(pos, std::move(left));
  }
  return result;
}

QuadResult integrate_tensor(const Integrand& f, Index length, const ParamBox& box, int n) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  const Index d = box.dim();
  std::vector<std::vector<double>> nodes(static_cast<std::size_t>(d));
  for (Index k = 0; k < d; ++k) {
    const double c = 0.5 * (box.lower()[k] + box.upper()[k]);
    const double h = 0.5 * (box.upper()[k] - box.lower()[k]);
    for (double xi : x) nodes[static_cast<std::size_t>(k)].push_back(c + h * xi);
  }
  const auto values = eval_grid(f, length, nodes);
  QuadResult result;
  result.value = Vector::Zero(length);
  result.error = Vector::Zero(length);
  result.evaluations = static_cast<int>(values.size());
  result.panels = 1;
  const double jac = box.volume() / std::pow(2.0, static_cast<double>(d));
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    std::size_t rem = flat;
    double weight = 1.0;
    for (Index k = d; k-- > 0;) {
      weight *= w[rem % static_cast<std::size_t>(n)];
      rem /= static_cast<std::size_t>(n);
    }
    result.value.noalias() += weight * values[flat];
  }
  result.value *= jac;
  return result;
}

QuadResult integrate_discrete(const Integrand& f, Index length, const std::vector<Point>& points) {
  std::vector<Vector> values(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    Vector v = f(points[i]);
    check_finite(v, points[i], length);
    values[i] = std::move(v);
  });
  QuadResult result;
  result.value = Vector::Zero(length);
  result.error = Vector::Zero(length);
  for (const auto& v : values) result.value += v;
  result.evaluations = static_cast<int>(points.size());
  result.panels = 0;
  return result;
}

}  // namespace

QuadResult integrate(const Integrand& f, Index length, const ParamBox& box, const QuadSpec& spec) {
  spec.validate(box);
  switch (spec.mode) {
    case QuadSpec::Mode::adaptive:
      return integrate_adaptive(f, length, box, spec);
    case QuadSpec::Mode::tensor:
      return integrate_tensor(f, length, box, spec.nodes);
    case QuadSpec::Mode::discrete:
      return integrate_discrete(f, length, spec.points);
  }
  throw ConfigError("unknown quadrature mode");
}

}  // namespace parrom
