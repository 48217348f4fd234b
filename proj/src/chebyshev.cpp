#include "parrom/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace parrom {

ChebSeries::ChebSeries(Vector coeffs, double a, double b) : coeffs_(std::move(coeffs)), a_(a), b_(b) {}

Vector cheb_points(Index n, double a, double b) {
  Vector x(n + 1);
  for (Index j = 0; j <= n; ++j) {
    const double t = n == 0 ? 1.0 : std::cos(std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
    x[j] = 0.5 * (a + b) + 0.5 * (b - a) * t;
  }
  return x;
}

ChebSeries ChebSeries::from_values(const Vector& values, double a, double b) {
  const Index n = values.size() - 1;
  if (n == 0) return ChebSeries(values, a, b);
  // DCT-I with a cosine table indexed by (j*k) mod 2n.
  const Index period = 2 * n;
  Vector table(period);
  for (Index i = 0; i < period; ++i) {
    table[i] = std::cos(std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  }
  Vector c(n + 1);
  for (Index k = 0; k <= n; ++k) {
    double s = 0.5 * (values[0] + ((k % 2 == 0) ? values[n] : -values[n]));
    Index idx = k;
    for (Index j = 1; j < n; ++j, idx += k) {
      if (idx >= period) idx %= period;
      s += values[j] * table[idx];
    }
    c[k] = 2.0 * s / static_cast<double>(n);
  }
  c[0] *= 0.5;
  c[n] *= 0.5;
  return ChebSeries(std::move(c), a, b);
}

double ChebSeries::operator()(double x) const {
  const double t = (2.0 * x - a_ - b_) / (b_ - a_);
  // Clenshaw recurrence.
  double b1 = 0.0, b2 = 0.0;
  for (Index k = coeffs_.size() - 1; k >= 1; --k) {
    const double b0 = coeffs_[k] + 2.0 * t * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return coeffs_.size() == 0 ? 0.0 : coeffs_[0] + t * b1 - b2;
}

ChebSeries ChebSeries::derivative() const {
  const Index n = degree();
  if (n <= 0) return ChebSeries(Vector::Zero(1), a_, b_);
  Vector d = Vector::Zero(n);
  // d_{k-1} = d_{k+1} + 2 k c_k
  for (Index k = n; k >= 1; --k) {
    const double next = (k + 1 <= n - 1) ? d[k + 1] : 0.0;
    d[k - 1] = next + 2.0 * static_cast<double>(k) * coeffs_[k];
  }
  d[0] *= 0.5;
  d *= 2.0 / (b_ - a_);
  return ChebSeries(std::move(d), a_, b_);
}

std::vector<double> ChebSeries::roots() const {
  std::vector<double> out;
  const double scale = coeffs_.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return out;
  Index m = degree();
  while (m > 0 && std::abs(coeffs_[m]) <= 1e-13 * scale) --m;
  if (m == 0) return out;
  auto to_interval = [&](double t) { return 0.5 * (a_ + b_) + 0.5 * (b_ - a_) * t; };
  if (m == 1) {
    const double t = -coeffs_[0] / coeffs_[1];
    if (std::abs(t) <= 1.0 + 1e-10) out.push_back(to_interval(std::clamp(t, -1.0, 1.0)));
    return out;
  }
  Matrix colleague = Matrix::Zero(m, m);
  colleague(0, 1) = 1.0;
  for (Index k = 1; k < m; ++k) {
    colleague(k, k - 1) = 0.5;
    if (k + 1 < m) colleague(k, k + 1) = 0.5;
  }
  for (Index j = 0; j < m; ++j) colleague(m - 1, j) -= coeffs_[j] / (2.0 * coeffs_[m]);
  Eigen::EigenSolver<Matrix> es(colleague, false);
  if (es.info() != Eigen::Success) return out;
  const ChebSeries ds = derivative();
  for (Index i = 0; i < m; ++i) {
    const Complex z = es.eigenvalues()[i];
    if (std::abs(z.imag()) > 1e-6 || std::abs(z.real()) > 1.0 + 1e-6) continue;
    double x = to_interval(std::clamp(z.real(), -1.0, 1.0));
    // Newton polish; keeps the eigenvalue estimate if a step does not help.
    for (int it = 0; it < 4; ++it) {
      const double fx = (*this)(x), dx = ds(x);
      if (fx == 0.0 || dx == 0.0) break;
      const double y = std::clamp(x - fx / dx, std::min(a_, b_), std::max(a_, b_));
      if (!(std::abs((*this)(y)) < std::abs(fx))) break;
      x = y;
    }
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double& argmax, int iterations) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iterations && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = f(x1);
    }
  }
  if (f1 >= f2) {
    argmax = x1;
    return f1;
  }
  argmax = x2;
  return f2;
}

namespace {

bool tail_ok(const Vector& c, double tol) {
  const double scale = c.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return true;
  const Index n = c.size() - 1;
  const Index tail = std::max<Index>(2, n / 8);
  return c.tail(tail).cwiseAbs().maxCoeff() <= tol * scale;
}

// Candidate extrema of a long series: resample it piecewise at low degree
// and take roots of the local derivatives.
void piecewise_critical_points(const ChebSeries& s, double a, double b, int depth,
                               std::vector<double>& out) {
  constexpr Index kLocal = 32;
  const Vector x = cheb_points(kLocal, a, b);
  Vector v(kLocal + 1);
  for (Index j = 0; j <= kLocal; ++j) v[j] = s(x[j]);
  const ChebSeries local = ChebSeries::from_values(v, a, b);
  if (depth > 0 && !tail_ok(local.coeffs(), 1e-12)) {
    const double mid = 0.5 * (a + b);
    piecewise_critical_points(s, a, mid, depth - 1, out);
    piecewise_critical_points(s, mid, b, depth - 1, out);
    return;
  }
  for (double r : local.derivative().roots()) out.push_back(r);
}

}  // namespace

IntervalMax maximize_on_interval(const std::function<double(double)>& f, double a, double b,
                                 const ChebMaxOptions& options) {
  IntervalMax result;
  auto eval = [&](double x) {
    ++result.evaluations;
    return f(x);
  };

  Index n = options.min_degree;
  Vector values(n + 1);
  Vector x = cheb_points(n, a, b);
  for (Index j = 0; j <= n; ++j) values[j] = eval(x[j]);

  double best = -std::numeric_limits<double>::infinity();
  double best_x = a;
  auto consider = [&](double value, double at) {
    if (!std::isfinite(value)) {
      best = value;
      best_x = at;
      return false;
    }
    if (value > best) {
      best = value;
      best_x = at;
    }
    return true;
  };
  auto scan = [&]() {
    for (Index j = 0; j <= n; ++j) {
      if (!consider(values[j], x[j])) return false;
    }
    return true;
  };

  if (!scan()) {
    result.value = best;
    result.argmax = best_x;
    result.degree = n;
    return result;
  }

  ChebSeries series;
  for (;;) {
    series = ChebSeries::from_values(values, a, b);
    if (tail_ok(series.coeffs(), options.tail_tol)) {
      result.converged = true;
      break;
    }
    if (2 * n > options.max_degree) break;
    // Points of degree 2n contain those of degree n at even indices.
    const Index m = 2 * n;
    Vector refined(m + 1);
    const Vector xm = cheb_points(m, a, b);
    for (Index j = 0; j <= m; ++j) {
      refined[j] = (j % 2 == 0) ? values[j / 2] : eval(xm[j]);
    }
    n = m;
    values = std::move(refined);
    x = xm;
    if (!scan()) {
      result.value = best;
      result.argmax = best_x;
      result.degree = n;
      return result;
    }
  }
  result.degree = n;

  consider(eval(a), a);
  consider(eval(b), b);
  if (result.converged) {
    std::vector<double> candidates;
    if (n <= 64) {
      candidates = series.derivative().roots();
    } else {
      const Index pieces = n / 32;
      const double h = (b - a) / static_cast<double>(pieces);
      for (Index i = 0; i < pieces; ++i) {
        piecewise_critical_points(series, a + h * static_cast<double>(i),
                                  i + 1 == pieces ? b : a + h * static_cast<double>(i + 1), 4,
                                  candidates);
      }
    }
    for (double c : candidates) {
      if (!consider(eval(c), c)) break;
    }
  } else {
    // Dense uniform sampling, then golden-section refinement of the leading
    // local maxima.
    const int samples = options.fallback_samples;
    std::vector<double> xs(static_cast<std::size_t>(samples)), fs(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
      xs[static_cast<std::size_t>(i)] = a + (b - a) * i / (samples - 1.0);
      fs[static_cast<std::size_t>(i)] = eval(xs[static_cast<std::size_t>(i)]);
      if (!consider(fs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(i)])) {
        result.value = best;
        result.argmax = best_x;
        return result;
      }
    }
    std::vector<int> peaks;
    for (int i = 0; i < samples; ++i) {
      const double left = i > 0 ? fs[static_cast<std::size_t>(i - 1)] : -INFINITY;
      const double right = i + 1 < samples ? fs[static_cast<std::size_t>(i + 1)] : -INFINITY;
      if (fs[static_cast<std::size_t>(i)] >= left && fs[static_cast<std::size_t>(i)] >= right) {
        peaks.push_back(i);
      }
    }
    std::sort(peaks.begin(), peaks.end(), [&](int l, int r) {
      return fs[static_cast<std::size_t>(l)] > fs[static_cast<std::size_t>(r)];
    });
    if (peaks.size() > 5) peaks.resize(5);
    for (int i : peaks) {
      const double lo = xs[static_cast<std::size_t>(std::max(0, i - 1))];
      const double hi = xs[static_cast<std::size_t>(std::min(samples - 1, i + 1))];
      double arg = lo;
      const double v = golden_section_max(eval, lo, hi, arg);
      if (!consider(v, arg)) break;
    }
  }
  result.value = best;
  result.argmax = best_x;
  return result;
}

}  // namespace parrom
