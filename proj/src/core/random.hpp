#pragma once

// Portable seeded generation. All streams derive from SplitMix64:
// state += 0x9E3779B97F4A7C15, then the stafford-13 style finaliser below.
// Uniform doubles take the top 53 bits, so results are bit-identical on
// every IEEE-754 platform.

#include <cstdint>

#include "linalg.hpp"

namespace subpert {

/// SplitMix64 output function applied to a single 64-bit word.
std::uint64_t splitmix64_mix(std::uint64_t z);

/// Seed of trial `index` under `master`: splitmix64_mix(master ^ splitmix64_mix(index + 1)).
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index);

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// [0, 1) with 53 random bits.
  double uniform();
  /// [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Standard normal by the Box-Muller transform (one draw per call).
  double normal();

 private:
  std::uint64_t state_;
};

/// Entries of the upper triangle drawn row by row from U[-1, 1), mirrored.
/// Identical output for identical (dim, seed).
SymmetricMatrix random_symmetric(int dim, std::uint64_t seed);

/// Standard-normal dim x rank matrix, orthonormalised by modified
/// Gram-Schmidt with one re-orthogonalisation pass. rank 0 yields dim x 0.
Matrix random_orthonormal(int dim, int rank, SplitMix64& rng);

Matrix random_normal(int rows, int cols, SplitMix64& rng);

/// Random symmetric matrix with spectral norm exactly `norm` (0 allowed).
SymmetricMatrix random_symmetric_with_norm(int dim, double norm,
                                           std::uint64_t seed);

}  // namespace subpert
