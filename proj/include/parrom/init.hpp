#ifndef PARROM_INIT_HPP
#define PARROM_INIT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "parrom/optim.hpp"

namespace parrom {

/// Coefficient functions of each ROM family plus frozen flags for the
/// optimizer.
struct RomStructure {
  std::string name = "custom";
  std::vector<ScalarCoeff> E, A, B, C;
  FrozenFlags frozen = {false, false, false, false};

  /// SP: parametric Ah only. IO: parametric Bh and Ch. All: every family
  /// affine in p. "const" keeps every family constant. One-dimensional
  /// parameter only, except for "const".
  static RomStructure preset(const std::string& name, Index dim = 1);
  /// Coefficient functions of an existing system.
  static RomStructure of(const ParametricSystem& sys);

  void validate(const ParamBox& box) const;
};

struct IrkaOptions {
  int max_iter = 100;
  double shift_tol = 1e-6;
  /// Initial shifts are log-spaced in [shift_lo, shift_hi].
  double shift_lo = 1e-1;
  double shift_hi = 1e3;
};

struct IrkaResult {
  Matrix V, W;
  Realization rom;
  CVector shifts;
  int iterations = 0;
  bool converged = false;
};

/// Tangential IRKA for a constant system. V, W have orthonormal columns.
IrkaResult irka(const Realization& fom, Index r, const IrkaOptions& options = {});

struct PirkaOptions {
  int ps = 4;
  Index rs = 4;
  Index r = 10;
  IrkaOptions irka;
};

struct PirkaResult {
  ParametricSystem rom;
  Matrix V;
  std::vector<Point> samples;
  std::vector<IrkaResult> local;
};

/// Local IRKA at p_s points per axis (endpoints included), global basis from
/// the leading r left singular vectors of all local bases, then one-sided
/// projection of every coefficient matrix.
PirkaResult pirka(const ParametricSystem& fom, const PirkaOptions& options = {});

/// Re-expresses a ROM in the given structure. Terms whose coefficient is
/// absent from the structure are evaluated at the box center and folded into
/// the constant term; structure terms with no counterpart start at zero.
ParametricSystem map_to_structure(const ParametricSystem& rom, const RomStructure& structure);

/// Eh1 = I, Ah1 = -diag(logspace(-1, 1, r)), other E/A terms zero, B/C
/// terms random with unit Frobenius norm.
ParametricSystem trivial_init(const RomStructure& structure, Index r, Index inputs, Index outputs,
                              const ParamBox& box, std::uint64_t seed);

}  // namespace parrom

#endif  // PARROM_INIT_HPP
