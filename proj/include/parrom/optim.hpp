#ifndef PARROM_OPTIM_HPP
#define PARROM_OPTIM_HPP

#include <array>
#include <string>
#include <vector>

#include "parrom/grad.hpp"
#include "parrom/io.hpp"
#include "parrom/stability.hpp"

namespace parrom {

enum class Family { E = 0, A = 1, B = 2, C = 3 };

const char* family_name(Family f);

/// Frozen flags indexed by Family.
using FrozenFlags = std::array<bool, 4>;

/// Layout of the optimization vector: every coefficient matrix of the
/// unfrozen families, column-major, in the order E, A, B, C.
class PackedVars {
 public:
  struct Block {
    Family family;
    std::size_t index;
    Index rows, cols;
    Index offset;
  };

  PackedVars(const ParametricSystem& rom, FrozenFlags frozen = {false, false, false, false});

  Index size() const { return size_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const FrozenFlags& frozen() const { return frozen_; }

  Vector pack(const ParametricSystem& rom) const;
  /// Replaces the unfrozen matrices of `like` with the entries of x.
  ParametricSystem unpack(const Vector& x, const ParametricSystem& like) const;
  Vector pack_gradient(const GradientSet& g) const;

 private:
  std::vector<Block> blocks_;
  FrozenFlags frozen_;
  Index size_ = 0;
};

struct OptimConfig {
  int max_iter = 250;
  double stop_tol = 1e-5;
  double c1 = 1e-4;
  double c2 = 0.9;
  double initial_step = 1.0;
  int max_halvings = 60;
  /// L-BFGS above this many variables.
  Index lbfgs_threshold = 5000;
  int lbfgs_memory = 20;
  /// A starting point with gradient norm at or below this (times max(1, |J|))
  /// counts as stationary.
  double stationary_tol = 1e-12;
  FrozenFlags frozen = {false, false, false, false};

  void validate() const;
};

struct GatedValue {
  double value = 0.0;
  GradientSet grad;
  StabilityReport stability;
};

/// Objective and gradient, or +inf (zero gradient) if the ROM is not stable
/// over the whole box or any evaluation fails.
GatedValue gated_objective(const ParametricSystem& fom, const ParametricSystem& rom,
                           const QuadSpec& spec = {});

/// ||next - prev|| / ||prev|| in the H2xL2 norm. +inf if either is unstable at
/// a quadrature node. Exactly 0 for identical coefficients.
double rom_change(const ParametricSystem& prev, const ParametricSystem& next,
                  const QuadSpec& spec = {});

enum class OptimStatus { tol_met, max_iter, line_search_failed };

const char* status_name(OptimStatus s);

struct IterateRecord {
  int iter = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  double rom_change = 0.0;
  double max_alpha = 0.0;
  int evaluations = 0;
  double step = 0.0;
  bool hessian_updated = false;
};

struct OptimRun {
  /// Row 0 is the starting point.
  std::vector<IterateRecord> history;
  ParametricSystem rom;
  OptimStatus status = OptimStatus::max_iter;
  Index variables = 0;
  int evaluations = 0;
  /// Accepted iterates whose abscissa was not negative; always zero unless
  /// the gate is broken.
  int feasibility_violations = 0;
  double seconds = 0.0;

  Json to_json() const;
  void write_csv(const std::string& path) const;
};

/// BFGS on the packed coefficient matrices with a weak Wolfe line search.
/// Stops when rom_change between accepted iterates drops below stop_tol.
OptimRun minimize(const ParametricSystem& fom, const ParametricSystem& rom0,
                  const OptimConfig& config = {}, const QuadSpec& spec = {});

}  // namespace parrom

#endif  // PARROM_OPTIM_HPP
