#pragma once

// Truncated N-dimensional isotropic harmonic oscillator in its energy
// eigenbasis, split by reflection parity.

#include <cstdint>
#include <vector>

#include "perturbation.hpp"

namespace subpert {

struct OscillatorModel {
  int dims = 0;   // N
  int n_max = 0;  // highest retained level
  SymmetricMatrix matrix = SymmetricMatrix::zero(1);  // diag(n + N/2)
  std::vector<long> multiplicities;                   // m_n = C(N+n-1, n)
  std::vector<int> level;                             // n of each basis vector
  std::vector<std::vector<int>> multi_index;          // occupation numbers
  std::vector<bool> even;                             // parity of each vector
  SpectralSet sigma_even;                             // {n + N/2 : n even}
  int total_dim() const { return matrix.dim(); }
  int even_dim() const;
};

long binomial(long n, long k);

/// Basis ordered by total degree, then lexicographically by multi-index.
/// Throws SizeError if the truncated dimension exceeds max_dim.
OscillatorModel build_oscillator(int dims, int n_max, long max_dim = 2000);

struct OscillatorResult {
  AnalysisRecord record;
  double complement_theta = 0.0;  // theta of the orthogonal complements
  bool complement_equal = false;  // | ||A^perp-L^perp|| - ||A-L|| | < 1e-12
  std::vector<long> cluster_counts;  // eigenvalues of L near each level
  bool localization_exact = false;   // cluster_counts == multiplicities
  int omega_count = 0;
  int even_dim = 0;
};

/// V is random_symmetric(dim, seed) (with the cross-parity blocks zeroed when
/// parity_preserving) rescaled to ||V|| = vnorm. Requires vnorm < 1/2.
OscillatorResult oscillator_experiment(int dims, int n_max, double vnorm,
                                       std::uint64_t seed,
                                       bool parity_preserving = false,
                                       long max_dim = 2000);

}  // namespace subpert
