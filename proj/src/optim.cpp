#include "parrom/optim.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <fstream>
#include <iomanip>
#include <limits>

#include "parrom/errors.hpp"

namespace parrom {

const char* family_name(Family f) {
  switch (f) {
    case Family::E: return "E";
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
  }
  return "?";
}

const char* status_name(OptimStatus s) {
  switch (s) {
    case OptimStatus::tol_met: return "tol_met";
    case OptimStatus::max_iter: return "max_iter";
    case OptimStatus::line_search_failed: return "line_search_failed";
  }
  return "?";
}

namespace {

const ParamSepMatrix& family_of(const ParametricSystem& s, Family f) {
  switch (f) {
    case Family::E: return s.E();
    case Family::A: return s.A();
    case Family::B: return s.B();
    case Family::C: return s.C();
  }
  return s.E();
}

const std::vector<Matrix>& family_of(const GradientSet& g, Family f) {
  switch (f) {
    case Family::E: return g.dE;
    case Family::A: return g.dA;
    case Family::B: return g.dB;
    case Family::C: return g.dC;
  }
  return g.dE;
}

constexpr std::array<Family, 4> kFamilies = {Family::E, Family::A, Family::B, Family::C};

}  // namespace

PackedVars::PackedVars(const ParametricSystem& rom, FrozenFlags frozen) : frozen_(frozen) {
  for (Family f : kFamilies) {
    if (frozen_[static_cast<std::size_t>(f)]) continue;
    const ParamSepMatrix& m = family_of(rom, f);
    for (std::size_t i = 0; i < m.size(); ++i) {
      blocks_.push_back(Block{f, i, m.rows(), m.cols(), size_});
      size_ += m.rows() * m.cols();
    }
  }
  if (size_ == 0) throw ConfigError("PackedVars: every family is frozen");
}

Vector PackedVars::pack(const ParametricSystem& rom) const {
  Vector x(size_);
  for (const Block& b : blocks_) {
    const Matrix& m = family_of(rom, b.family).term(b.index).matrix;
    if (m.rows() != b.rows || m.cols() != b.cols) throw DimensionError("pack: layout mismatch");
    Eigen::Map<Matrix>(x.data() + b.offset, b.rows, b.cols) = m;
  }
  return x;
}

ParametricSystem PackedVars::unpack(const Vector& x, const ParametricSystem& like) const {
  if (x.size() != size_) throw DimensionError("unpack: vector length mismatch");
  std::array<std::vector<Matrix>, 4> mats;
  for (Family f : kFamilies) {
    for (const Term& t : family_of(like, f).terms()) mats[static_cast<std::size_t>(f)].push_back(t.matrix);
  }
  for (const Block& b : blocks_) {
    mats[static_cast<std::size_t>(b.family)][b.index] =
        Eigen::Map<const Matrix>(x.data() + b.offset, b.rows, b.cols);
  }
  return ParametricSystem(like.E().with_matrices(std::move(mats[0])),
                          like.A().with_matrices(std::move(mats[1])),
                          like.B().with_matrices(std::move(mats[2])),
                          like.C().with_matrices(std::move(mats[3])), like.domain());
}

Vector PackedVars::pack_gradient(const GradientSet& g) const {
  Vector x(size_);
  for (const Block& b : blocks_) {
    const Matrix& m = family_of(g, b.family).at(b.index);
    Eigen::Map<Matrix>(x.data() + b.offset, b.rows, b.cols) = m;
  }
  return x;
}

void OptimConfig::validate() const {
  if (!(0.0 < c1 && c1 < c2 && c2 < 1.0)) throw ConfigError("Wolfe constants need 0 < c1 < c2 < 1");
  if (max_iter < 1) throw ConfigError("max_iter must be positive");
  if (!(stop_tol > 0.0)) throw ConfigError("stop_tol must be positive");
  if (!(initial_step > 0.0)) throw ConfigError("initial_step must be positive");
}

GatedValue gated_objective(const ParametricSystem& fom, const ParametricSystem& rom,
                           const QuadSpec& spec) {
  GatedValue out;
  out.stability = max_abscissa_over_box(rom);
  if (!(out.stability.max_alpha < 0.0)) {
    out.value = std::numeric_limits<double>::infinity();
    out.grad = GradientSet::zeros_like(rom);
    return out;
  }
  try {
    ObjectiveGrad g = gradient(fom, rom, spec);
    out.value = g.value;
    out.grad = std::move(g.grad);
  } catch (const NumericError&) {
    out.value = std::numeric_limits<double>::infinity();
    out.grad = GradientSet::zeros_like(rom);
  }
  if (!std::isfinite(out.value)) {
    out.value = std::numeric_limits<double>::infinity();
    out.grad = GradientSet::zeros_like(rom);
  }
  return out;
}

namespace {

bool same_matrix_function(const ParamSepMatrix& a, const ParamSepMatrix& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a.term(i).coeff.mergeable_with(b.term(i).coeff)) return false;
    if (a.term(i).matrix.rows() != b.term(i).matrix.rows() || a.term(i).matrix.cols() != b.term(i).matrix.cols() ||
        a.term(i).matrix != b.term(i).matrix) {
      return false;
    }
  }
  return true;
}

}  // namespace

double rom_change(const ParametricSystem& prev, const ParametricSystem& next, const QuadSpec& spec) {
  try {
    if (!(prev.domain() == next.domain())) throw DomainError("rom_change: domains differ");
    const bool identical = same_matrix_function(prev.E(), next.E()) && same_matrix_function(prev.A(), next.A()) &&
                           same_matrix_function(prev.B(), next.B()) && same_matrix_function(prev.C(), next.C());
    const ParametricSystem diff = error_system(next, prev);
    // Both norms share one set of quadrature points.
    const QuadResult q = integrate(
        [&](const Point& p) {
          const Realization d = diff.at_unchecked(p);
          if (!(spectral_abscissa(d.A, d.E) < 0.0)) throw NumericError("rom_change: unstable at a quadrature node");
          Vector v(2);
          v[0] = identical ? 0.0 : h2_norm_sq(d);
          v[1] = h2_norm_sq(prev.at_unchecked(p));
          return v;
        },
        2, prev.domain(), spec);
    if (!(q.value[1] > 0.0)) return std::numeric_limits<double>::infinity();
    return std::sqrt(std::max(0.0, q.value[0]) / q.value[1]);
  } catch (const NumericError&) {
    return std::numeric_limits<double>::infinity();
  }
}

namespace {

/// Inverse Hessian approximation, dense or limited memory.
class InverseHessian {
 public:
  InverseHessian(Index n, bool limited, int memory) : n_(n), limited_(limited), memory_(memory) {
    if (!limited_) H_ = Matrix::Identity(n, n);
  }

  Vector apply(const Vector& g) const {
    if (!limited_) return H_ * g;
    Vector q = g;
    std::vector<double> alpha(s_.size());
    for (std::size_t i = s_.size(); i-- > 0;) {
      alpha[i] = rho_[i] * s_[i].dot(q);
      q -= alpha[i] * y_[i];
    }
    q *= gamma_;
    for (std::size_t i = 0; i < s_.size(); ++i) {
      const double beta = rho_[i] * y_[i].dot(q);
      q += (alpha[i] - beta) * s_[i];
    }
    return q;
  }

  void update(const Vector& s, const Vector& y) {
    const double sy = s.dot(y);
    const double rho = 1.0 / sy;
    if (first_) {
      gamma_ = sy / y.squaredNorm();
      if (!limited_) H_ *= gamma_;
      first_ = false;
    }
    if (limited_) {
      s_.push_back(s);
      y_.push_back(y);
      rho_.push_back(rho);
      if (static_cast<int>(s_.size()) > memory_) {
        s_.pop_front();
        y_.pop_front();
        rho_.pop_front();
      }
      gamma_ = sy / y.squaredNorm();
      return;
    }
    const Vector Hy = H_ * y;
    const double yHy = y.dot(Hy);
    H_ += ((sy + yHy) * rho * rho) * (s * s.transpose()) - rho * (Hy * s.transpose() + s * Hy.transpose());
  }

  void reset() {
    if (!limited_) H_ = Matrix::Identity(n_, n_);
    s_.clear();
    y_.clear();
    rho_.clear();
    gamma_ = 1.0;
    first_ = true;
  }

 private:
  Index n_;
  bool limited_;
  int memory_;
  Matrix H_;
  std::deque<Vector> s_, y_;
  std::deque<double> rho_;
  double gamma_ = 1.0;
  bool first_ = true;
};

struct Trial {
  Vector x;
  GatedValue value;
  Vector g;
  double step = 0.0;
};

}  // namespace

OptimRun minimize(const ParametricSystem& fom, const ParametricSystem& rom0,
                  const OptimConfig& config, const QuadSpec& spec) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const PackedVars layout(rom0, config.frozen);
  OptimRun run{.history = {}, .rom = rom0};
  run.variables = layout.size();

  auto evaluate = [&](const Vector& x, Trial& t) {
    t.x = x;
    t.value = gated_objective(fom, layout.unpack(x, rom0), spec);
    t.g = layout.pack_gradient(t.value.grad);
    ++run.evaluations;
  };

  Trial cur;
  evaluate(layout.pack(rom0), cur);
  if (!(cur.value.stability.max_alpha < 0.0)) {
    throw InitError("initial ROM is not stable over the parameter box (max abscissa " +
                    std::to_string(cur.value.stability.max_alpha) + ")");
  }
  if (!std::isfinite(cur.value.value)) throw InitError("objective is not finite at the initial ROM");
  ParametricSystem cur_rom = rom0;
  run.history.push_back(IterateRecord{0, cur.value.value, cur.g.norm(), 0.0,
                                      cur.value.stability.max_alpha, 1, 0.0, false});

  InverseHessian hess(layout.size(), layout.size() > config.lbfgs_threshold, config.lbfgs_memory);
  run.status = OptimStatus::max_iter;

  for (int it = 1; it <= config.max_iter; ++it) {
    const double gnorm = cur.g.norm();
    Vector d = -hess.apply(cur.g);
    double slope = cur.g.dot(d);
    if (!(slope < 0.0)) {
      hess.reset();
      d = -cur.g;
      slope = cur.g.dot(d);
    }
    if (gnorm <= config.stationary_tol * std::max(1.0, std::abs(cur.value.value)) || !(slope < 0.0)) {
      run.history.push_back(IterateRecord{it, cur.value.value, gnorm, 0.0,
                                          cur.value.stability.max_alpha, 0, 0.0, false});
      run.status = OptimStatus::tol_met;
      break;
    }

    // Weak Wolfe bracketing. Infeasible or non-decreasing trials shrink the
    // bracket from above; trials with too little curvature raise the floor.
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    double t = config.initial_step;
    Trial best;
    bool have_armijo = false, wolfe = false;
    int evals = 0, halvings = 0, expansions = 0;
    for (;;) {
      Trial trial;
      evaluate(cur.x + t * d, trial);
      trial.step = t;
      ++evals;
      const double f = trial.value.value;
      if (!std::isfinite(f) || f > cur.value.value + config.c1 * t * slope || !(f < cur.value.value)) {
        hi = t;
      } else {
        have_armijo = true;
        best = std::move(trial);
        if (best.g.dot(d) < config.c2 * slope) {
          lo = t;
        } else {
          wolfe = true;
          break;
        }
      }
      if (std::isfinite(hi)) {
        if (++halvings > config.max_halvings) break;
        t = 0.5 * (lo + hi);
      } else {
        if (++expansions > 20) break;
        t *= 2.0;
      }
    }
    if (!have_armijo) {
      run.status = OptimStatus::line_search_failed;
      break;
    }

    const ParametricSystem next_rom = layout.unpack(best.x, rom0);
    if (!(best.value.stability.max_alpha < 0.0)) ++run.feasibility_violations;
    const Vector s = best.x - cur.x;
    const Vector y = best.g - cur.g;
    const bool update = wolfe && s.dot(y) > 0.0;
    if (update) hess.update(s, y);
    const double change = rom_change(cur_rom, next_rom, spec);
    cur = std::move(best);
    cur_rom = next_rom;
    run.history.push_back(IterateRecord{it, cur.value.value, cur.g.norm(), change,
                                        cur.value.stability.max_alpha, evals, cur.step, update});
    if (change < config.stop_tol) {
      run.status = OptimStatus::tol_met;
      break;
    }
  }
  run.rom = cur_rom;
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

Json OptimRun::to_json() const {
  Json rows = Json::array();
  for (const IterateRecord& r : history) {
    rows.push_back({{"iter", r.iter},
                    {"objective", r.objective},
                    {"grad_norm", r.grad_norm},
                    {"rom_change", r.rom_change},
                    {"max_alpha", r.max_alpha},
                    {"evaluations", r.evaluations},
                    {"step", r.step},
                    {"hessian_updated", r.hessian_updated}});
  }
  return {{"status", status_name(status)},
          {"variables", variables},
          {"evaluations", evaluations},
          {"feasibility_violations", feasibility_violations},
          {"seconds", seconds},
          {"iterates", rows}};
}

void OptimRun::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << std::setprecision(17);
  out << "iter,objective,grad_norm,rom_change,max_alpha,evaluations,step,hessian_updated\n";
  for (const IterateRecord& r : history) {
    out << r.iter << ',' << r.objective << ',' << r.grad_norm << ',' << r.rom_change << ','
        << r.max_alpha << ',' << r.evaluations << ',' << r.step << ',' << (r.hessian_updated ? 1 : 0)
        << '\n';
  }
}

}  // namespace parrom
