#pragma once

#include <vector>

#include "linalg.hpp"

namespace subpert {

/// Orthogonal projection together with orthonormal bases of its range and of
/// the orthogonal complement. The pair (basis | complement_basis) is the
/// adapted frame used for block decompositions.
class Projector {
 public:
  /// basis must have orthonormal columns (residual < 1e-10). The complement
  /// basis is completed with a Householder QR.
  static Projector from_basis(Matrix basis);
  /// (basis | complement) must form an orthogonal matrix.
  static Projector from_split(Matrix basis, Matrix complement);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  int rank() const { return static_cast<int>(basis_.cols()); }
  const Matrix& matrix() const { return matrix_; }
  const Matrix& basis() const { return basis_; }
  const Matrix& complement_basis() const { return complement_; }
  Matrix frame() const;
  Projector complement() const;

 private:
  Projector(Matrix basis, Matrix complement);
  Matrix basis_;
  Matrix complement_;
  Matrix matrix_;
};

/// Indices of eigenvalues inside and outside a spectral set.
struct SpectralSplit {
  std::vector<int> inside;
  std::vector<int> outside;
};

/// 1e-9 (1 + ||A||).
double default_tolerance(const SymmetricMatrix& a);

/// An eigenvalue is inside when its distance to s is at most tol and outside
/// when it exceeds 2 tol; anything in between throws AmbiguityError.
SpectralSplit classify_eigenvalues(const Vector& eigenvalues,
                                   const SpectralSet& s, double tol);

Projector projector_from_split(const EigenDecomposition& eig,
                               const SpectralSplit& split);

Projector spectral_projection(const SymmetricMatrix& a, const SpectralSet& s,
                              double tol);
Projector spectral_projection(const SymmetricMatrix& a, const SpectralSet& s);

/// Minimum distance between the two classes of a split.
double split_gap(const Vector& eigenvalues, const SpectralSplit& split);

/// dist(sigma, Sigma) for the eigenvalue classes selected by sigma. Throws
/// ValidationError when sigma selects none or all eigenvalues.
double gap(const SymmetricMatrix& a, const SpectralSet& sigma);

/// Eigenvalues listed by index, as a point set.
SpectralSet eigenvalue_set(const Vector& eigenvalues,
                           const std::vector<int>& indices);

}  // namespace subpert
