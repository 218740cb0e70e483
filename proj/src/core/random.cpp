#include "random.hpp"

#include <cmath>

#include "bounds.hpp"
#include "errors.hpp"

namespace subpert {

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64_mix(master ^ splitmix64_mix(index + 1));
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return splitmix64_mix(state_);
}

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
  if (n == 0) throw ValidationError("below(0) is empty");
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % n;
}

double SplitMix64::normal() {
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

SymmetricMatrix random_symmetric(int dim, std::uint64_t seed) {
  if (dim < 1) throw DimensionError("random_symmetric: dim must be >= 1");
  SplitMix64 rng(seed);
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      const double v = rng.uniform(-1.0, 1.0);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return SymmetricMatrix(std::move(m));
}

Matrix random_normal(int rows, int cols, SplitMix64& rng) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

Matrix random_orthonormal(int dim, int rank, SplitMix64& rng) {
  if (rank < 0 || rank > dim) {
    throw DimensionError("random_orthonormal: need 0 <= rank <= dim");
  }
  Matrix q = random_normal(dim, rank, rng);
  for (int j = 0; j < rank; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < j; ++k) {
        q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
      }
    }
    const double nrm = q.col(j).norm();
    if (!(nrm > 1e-12)) throw NumericError("Gram-Schmidt breakdown");
    q.col(j) /= nrm;
  }
  return q;
}

SymmetricMatrix random_symmetric_with_norm(int dim, double norm,
                                           std::uint64_t seed) {
  if (!(norm >= 0.0)) throw ValidationError("norm must be non-negative");
  if (norm == 0.0) return SymmetricMatrix::zero(dim);
  const SymmetricMatrix raw = random_symmetric(dim, seed);
  const double n0 = operator_norm(raw);
  if (!(n0 > 0.0)) throw NumericError("random matrix vanished");
  return raw.scaled(norm / n0);
}

}  // namespace subpert
