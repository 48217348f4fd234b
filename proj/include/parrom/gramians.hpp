#ifndef PARROM_GRAMIANS_HPP
#define PARROM_GRAMIANS_HPP

#include <string>
#include <vector>

#include "parrom/mateq.hpp"
#include "parrom/psys.hpp"
#include "parrom/quad.hpp"

namespace parrom {

enum class GramianSide { controllability, observability, both };

/// Blocks of the error-system Gramians at one parameter point.
///
///   A Pt Eh^T + E Pt Ah^T + B Bh^T = 0
///   Ah Ph Eh^T + Eh Ph Ah^T + Bh Bh^T = 0
///   A^T Qt Eh + E^T Qt Ah - C^T Ch = 0
///   Ah^T Qh Eh + Eh^T Qh Ah + Ch^T Ch = 0
struct GramianBlocks {
  Matrix Pt, Ph, Qt, Qh;
  Point at_p;
};

GramianBlocks gramian_blocks(const Realization& fom, const Realization& rom,
                             GramianSide which = GramianSide::both);
GramianBlocks gramian_blocks(const ParametricSystem& fom, const ParametricSystem& rom,
                             const Point& p, GramianSide which = GramianSide::both);

/// trace(C P C^T), P the controllability Gramian.
double h2_norm_sq(const Realization& sys);
double h2_norm_sq(const ParametricSystem& sys, const Point& p);
/// trace(B^T Q B), Q the observability Gramian.
double h2_norm_sq_dual(const Realization& sys);
double h2_norm_sq_dual(const ParametricSystem& sys, const Point& p);

/// Pointwise integrand of the reduced objective:
/// trace(Ch Ph Ch^T) - 2 trace(C Pt Ch^T).
double js_integrand(const Realization& fom, const Realization& rom, const GramianBlocks& g);

/// Reduced objective, i.e. the squared H2xL2 error minus the squared FOM
/// norm. Returns +inf if any point fails.
double objective_Js(const ParametricSystem& fom, const ParametricSystem& rom,
                    const QuadSpec& spec = {});

/// Integral over the box of the squared H2 norm. Throws on failure.
double fom_h2l2_norm_sq(const ParametricSystem& sys, const QuadSpec& spec = {});

/// Squared H2xL2 norm of fom - rom, from the error system.
double h2l2_error_sq(const ParametricSystem& fom, const ParametricSystem& rom,
                     const QuadSpec& spec = {});

struct MetricGrids {
  /// Parameter values for the eps_p curve and the heatmap. Empty: 101
  /// linearly spaced points over the box (d = 1 only).
  std::vector<Point> params;
  /// Frequencies. Empty: 101 log-spaced values in [1e-2, 1e4].
  std::vector<double> omegas;
};

struct ErrorMetrics {
  double eps = 0.0;
  double fom_norm = 0.0;
  std::vector<Point> params;
  std::vector<double> omegas;
  /// H2 error at params[i], relative to the H2xL2 norm of the FOM.
  std::vector<double> eps_p;
  /// eps_omega_p[i][j]: Frobenius transfer error at (omegas[j], params[i]),
  /// relative to the H2xL2 norm of the FOM.
  std::vector<std::vector<double>> eps_omega_p;
};

/// fom_norm_sq < 0 means compute it.
ErrorMetrics error_metrics(const ParametricSystem& fom, const ParametricSystem& rom,
                           const QuadSpec& spec = {}, MetricGrids grids = {},
                           double fom_norm_sq = -1.0);

void write_eps_p_csv(const ErrorMetrics& m, const std::string& path);
void write_eps_omega_p_csv(const ErrorMetrics& m, const std::string& path);

}  // namespace parrom

#endif  // PARROM_GRAMIANS_HPP
