#pragma once

// Dense real-symmetric linear algebra: the operator carrier, its
// eigendecomposition, spectral norms, finite unions of closed intervals used
// as spectral sets, spectral projections and the spectral gap.

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace subpert {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class SymmetricMatrix {
 public:
  /// Accepts m when max|m - m^T| < 1e-12 (and stores the symmetric part);
  /// throws ValidationError otherwise.
  explicit SymmetricMatrix(Matrix m);

  /// Always stores (m + m^T) / 2.
  static SymmetricMatrix symmetrized(const Matrix& m);
  static SymmetricMatrix zero(int dim);
  static SymmetricMatrix diagonal(std::span<const double> values);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  SymmetricMatrix operator+(const SymmetricMatrix& o) const;
  SymmetricMatrix operator-(const SymmetricMatrix& o) const;
  SymmetricMatrix scaled(double s) const;

 private:
  struct Trusted {};
  SymmetricMatrix(Matrix m, Trusted) : m_(std::move(m)) {}
  Matrix m_;
};

struct EigenDecomposition {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthogonal, columns paired with eigenvalues
};

/// Throws NumericError when the solver fails to converge.
EigenDecomposition eig_sym(const SymmetricMatrix& m);
Vector eigenvalues_sym(const SymmetricMatrix& m);

/// Spectral norm (largest singular value) of an arbitrary real matrix.
double operator_norm(const Matrix& m);
double operator_norm(const SymmetricMatrix& m);

struct Interval {
  double lo;
  double hi;
};

/// Finite union of closed intervals, kept sorted and pairwise disjoint.
/// A point is a zero-length interval.
class SpectralSet {
 public:
  SpectralSet() = default;
  /// Sorts and merges overlapping or touching intervals; rejects lo > hi.
  static SpectralSet from_intervals(std::vector<Interval> intervals);
  static SpectralSet points(std::span<const double> values);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  /// Inclusive membership, optionally widened by tol on each side.
  bool contains(double x, double tol = 0.0) const;
  /// 0 inside the set; +inf for the empty set.
  double distance(double x) const;
  /// Closed r-neighbourhood O_r(S).
  SpectralSet neighborhood(double r) const;
  /// S_1 contained in S_2 up to tol.
  bool subset_of(const SpectralSet& other, double tol = 0.0) const;

 private:
  std::vector<Interval> intervals_;
};

/// Distance between two spectral sets; +inf if either is empty.
double distance(const SpectralSet& a, const SpectralSet& b);

}  // namespace subpert

namespace subpert {

/// f applied to the spectrum of a symmetric matrix: V f(D) V^T.
template <class F>
Matrix spectral_function(const SymmetricMatrix& m, F f) {
  const auto eig = eig_sym(m);
  Vector fd = eig.eigenvalues.unaryExpr(f);
  return eig.eigenvectors * fd.asDiagonal() * eig.eigenvectors.transpose();
}

/// (I + M^T M)^p for an arbitrary M, via the eigendecomposition of the Gram
/// matrix.
Matrix gram_power(const Matrix& m, double p);

}  // namespace subpert
