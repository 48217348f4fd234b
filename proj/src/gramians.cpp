#include "parrom/gramians.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include "parrom/errors.hpp"
#include "parrom/parallel.hpp"

namespace parrom {

GramianBlocks gramian_blocks(const Realization& fom, const Realization& rom, GramianSide which) {
  if (fom.B.cols() != rom.B.cols() || fom.C.rows() != rom.C.rows()) {
    throw DimensionError("gramian_blocks: input/output counts differ");
  }
  GramianBlocks g;
  const ShiftedPencil<double> pencil(fom.A, fom.E);
  if (which != GramianSide::observability) {
    g.Pt = pencil.solve_sylvester(rom.A, rom.E, fom.B * rom.B.transpose());
    g.Ph = solve_lyap(rom.A, rom.E, rom.B * rom.B.transpose(), LyapSide::controllability);
  }
  if (which != GramianSide::controllability) {
    g.Qt = pencil.solve_sylvester_transposed(rom.A, rom.E, -(fom.C.transpose() * rom.C));
    g.Qh = solve_lyap(rom.A, rom.E, rom.C.transpose() * rom.C, LyapSide::observability);
  }
  return g;
}

GramianBlocks gramian_blocks(const ParametricSystem& fom, const ParametricSystem& rom,
                             const Point& p, GramianSide which) {
  if (!(fom.domain() == rom.domain())) throw DimensionError("gramian_blocks: domains differ");
  GramianBlocks g = gramian_blocks(fom.at(p), rom.at(p), which);
  g.at_p = p;
  return g;
}

double h2_norm_sq(const Realization& sys) {
  const Matrix P = solve_lyap(sys.A, sys.E, sys.B * sys.B.transpose(), LyapSide::controllability);
  return (sys.C * P * sys.C.transpose()).trace();
}

double h2_norm_sq(const ParametricSystem& sys, const Point& p) { return h2_norm_sq(sys.at(p)); }

double h2_norm_sq_dual(const Realization& sys) {
  const Matrix Q = solve_lyap(sys.A, sys.E, sys.C.transpose() * sys.C, LyapSide::observability);
  return (sys.B.transpose() * Q * sys.B).trace();
}

double h2_norm_sq_dual(const ParametricSystem& sys, const Point& p) {
  return h2_norm_sq_dual(sys.at(p));
}

double js_integrand(const Realization& fom, const Realization& rom, const GramianBlocks& g) {
  const Matrix CPt = fom.C * g.Pt;
  return (rom.C * g.Ph * rom.C.transpose()).trace() -
         2.0 * (CPt.array() * rom.C.array()).sum();
}

double objective_Js(const ParametricSystem& fom, const ParametricSystem& rom, const QuadSpec& spec) {
  if (!(fom.domain() == rom.domain())) throw DimensionError("objective_Js: domains differ");
  try {
    const QuadResult q = integrate(
        [&](const Point& p) {
          const Realization f = fom.at_unchecked(p);
          const Realization r = rom.at_unchecked(p);
          const GramianBlocks g = gramian_blocks(f, r, GramianSide::controllability);
          return Vector::Constant(1, js_integrand(f, r, g));
        },
        1, fom.domain(), spec);
    return q.value[0];
  } catch (const NumericError&) {
    return std::numeric_limits<double>::infinity();
  }
}

double fom_h2l2_norm_sq(const ParametricSystem& sys, const QuadSpec& spec) {
  const QuadResult q = integrate(
      [&](const Point& p) { return Vector::Constant(1, h2_norm_sq(sys.at_unchecked(p))); }, 1,
      sys.domain(), spec);
  if (q.capped) warn("H2xL2 norm: quadrature panel cap reached");
  return q.value[0];
}

double h2l2_error_sq(const ParametricSystem& fom, const ParametricSystem& rom, const QuadSpec& spec) {
  return std::max(0.0, fom_h2l2_norm_sq(error_system(fom, rom), spec));
}

ErrorMetrics error_metrics(const ParametricSystem& fom, const ParametricSystem& rom,
                           const QuadSpec& spec, MetricGrids grids, double fom_norm_sq) {
  const ParamBox& box = fom.domain();
  if (grids.params.empty()) {
    if (box.dim() != 1) throw ConfigError("error_metrics: parameter grid required for d > 1");
    for (int i = 0; i <= 100; ++i) {
      grids.params.push_back(Point::Constant(1, box.lower()[0] + (box.upper()[0] - box.lower()[0]) * i / 100.0));
    }
  }
  if (grids.omegas.empty()) {
    for (int i = 0; i <= 100; ++i) grids.omegas.push_back(std::pow(10.0, -2.0 + 6.0 * i / 100.0));
  }
  const ParametricSystem err = error_system(fom, rom);
  ErrorMetrics m;
  if (fom_norm_sq < 0.0) fom_norm_sq = fom_h2l2_norm_sq(fom, spec);
  m.fom_norm = std::sqrt(fom_norm_sq);
  m.eps = std::sqrt(std::max(0.0, fom_h2l2_norm_sq(err, spec))) / m.fom_norm;
  m.params = grids.params;
  m.omegas = grids.omegas;
  const std::size_t np = m.params.size();
  m.eps_p.assign(np, 0.0);
  m.eps_omega_p.assign(np, std::vector<double>(m.omegas.size(), 0.0));
  parallel_for(np, [&](std::size_t i) {
    const Realization e = err.at(m.params[i]);
    m.eps_p[i] = std::sqrt(std::max(0.0, h2_norm_sq(e))) / m.fom_norm;
    for (std::size_t j = 0; j < m.omegas.size(); ++j) {
      m.eps_omega_p[i][j] = transfer_eval(e, Complex(0.0, m.omegas[j])).norm() / m.fom_norm;
    }
  });
  return m;
}

namespace {

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << std::setprecision(17);
  return out;
}

void write_point(std::ofstream& out, const Point& p) {
  for (Index k = 0; k < p.size(); ++k) out << (k ? "," : "") << p[k];
}

std::string param_header(Index d) {
  if (d == 1) return "p";
  std::string h;
  for (Index k = 0; k < d; ++k) h += (k ? ",p" : "p") + std::to_string(k + 1);
  return h;
}

}  // namespace

void write_eps_p_csv(const ErrorMetrics& m, const std::string& path) {
  std::ofstream out = open_csv(path);
  const Index d = m.params.empty() ? 1 : m.params.front().size();
  out << param_header(d) << ",eps_p\n";
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    write_point(out, m.params[i]);
    out << ',' << m.eps_p[i] << '\n';
  }
}

void write_eps_omega_p_csv(const ErrorMetrics& m, const std::string& path) {
  std::ofstream out = open_csv(path);
  const Index d = m.params.empty() ? 1 : m.params.front().size();
  out << "omega," << param_header(d) << ",eps_omega_p\n";
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    for (std::size_t j = 0; j < m.omegas.size(); ++j) {
      out << m.omegas[j] << ',';
      write_point(out, m.params[i]);
      out << ',' << m.eps_omega_p[i][j] << '\n';
    }
  }
}

}  // namespace parrom
