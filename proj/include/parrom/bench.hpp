#ifndef PARROM_BENCH_HPP
#define PARROM_BENCH_HPP

#include <cstdint>
#include <string>

#include "parrom/psys.hpp"

namespace parrom {

/// E = I, A(p) = A1 + p A2 with n/2 blocks [[-p a_k, b_k], [-b_k, -p a_k]],
/// a_k log-spaced in [0.1, 10], b_k log-spaced in [1, 1000], B = C^T = ones.
ParametricSystem gen_synthetic(Index n, ParamBox box = ParamBox::interval(0.02, 1.0));

/// Penzl-type model with one parametric block [[-1, p], [-p, -1]], fixed
/// blocks at imaginary parts 200 and 400, and a diagonal tail of `tail`
/// entries linearly spaced in [-1000, -1]. Order 6 + tail.
ParametricSystem gen_penzl_param(Index tail = 1000, ParamBox box = ParamBox::interval(10.0, 100.0));

struct ChainConstants {
  double masses[3] = {1.0, 2.0, 3.0};
  double stiffness[3] = {10.0, 20.0, 1.0};
  double central_mass = 10.0;
  double ground_stiffness = 50.0;
};

struct SecondOrder {
  Matrix M, K, B, C;
};

/// Three spring-mass chains of `chain_length` masses each, fixed to a wall at
/// one end and joined at a central mass tied to the ground.
SecondOrder triple_chain_matrices(Index chain_length, const ChainConstants& constants = {});

struct TripleChain {
  ParametricSystem system;
  SecondOrder second_order;
  double gamma = 0.0;
};

/// First-order realization of M q'' + p (M + K) q' + K q = B u, y = C q with
/// E = [[K, g M], [g M, M]], A(p) = [[-g K, K - g D], [-K, g M - D]],
/// B = [g B; B], C = [C, 0], where g is half the minimum over the box of the
/// smallest eigenvalue of (D, M + D K^{-1} D / 4). Order 2 (3 chain_length + 1).
TripleChain gen_triple_chain(Index chain_length, ParamBox box = ParamBox::interval(2e-3, 2e-2),
                             const ChainConstants& constants = {});

struct BaurOracle {
  /// B(p) = B1 + p1 B2, C(p) = C1 + p2 C2 over [0, 1]^2.
  ParametricSystem system;
  /// [C1; C2] (sE - A)^{-1} [B1, B2]
  Realization G;
  Matrix L;
  /// Realization of L^T G L.
  Realization weighted;
};

/// Random SISO instance with E symmetric positive definite and A + A^T
/// negative definite.
BaurOracle gen_baur_oracle(Index n, std::uint64_t seed);

}  // namespace parrom

#endif  // PARROM_BENCH_HPP
