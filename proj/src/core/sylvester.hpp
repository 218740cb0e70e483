#pragma once

// Sylvester equations X L0 - L1 X = Y with symmetric coefficients, the
// pi/2 norm certificate, the cross-projection estimate, and residuals of the
// Riccati equation satisfied by angular operators of reducing graph
// subspaces.

#include "projector.hpp"
#include "subspace.hpp"

namespace subpert {

class SylvesterProblem {
 public:
  /// lambda0 is n0 x n0, lambda1 is n1 x n1, y is n1 x n0. delta is computed.
  SylvesterProblem(SymmetricMatrix lambda0, SymmetricMatrix lambda1, Matrix y);

  const SymmetricMatrix& lambda0() const { return lambda0_; }
  const SymmetricMatrix& lambda1() const { return lambda1_; }
  const Matrix& y() const { return y_; }
  /// dist(spec lambda0, spec lambda1).
  double delta() const { return delta_; }
  const EigenDecomposition& eig0() const { return eig0_; }
  const EigenDecomposition& eig1() const { return eig1_; }

 private:
  SymmetricMatrix lambda0_;
  SymmetricMatrix lambda1_;
  Matrix y_;
  EigenDecomposition eig0_;
  EigenDecomposition eig1_;
  double delta_;
};

/// ||X L0 - L1 X - Y||_2.
double sylvester_residual(const SylvesterProblem& p, const Matrix& x);

/// Entrywise division in the coefficient eigenbases. Throws NumericError when
/// delta <= 1e-8 (1 + ||L0|| + ||L1||).
Matrix solve_sylvester(const SylvesterProblem& p);

struct SylvesterBoundReport {
  double lhs;  // delta ||X||
  double rhs;  // (pi/2) ||Y||
  bool pass;
};

/// Re-checks the residual (NumericError if X does not solve p) and compares
/// delta ||X|| with (pi/2) ||Y||.
SylvesterBoundReport sylvester_bound_check(const SylvesterProblem& p,
                                           const Matrix& x);

struct CrossProjectionReport {
  double distance;  // dist(omega, Omega)
  double lhs;       // dist(omega, Omega) ||E_A(omega) E_B(Omega)||
  double rhs;       // (pi/2) ||B - A||
  bool pass;
  bool trivial;     // distance was zero
};

CrossProjectionReport cross_projection_check(const SymmetricMatrix& a,
                                             const SymmetricMatrix& b,
                                             const SpectralSet& omega,
                                             const SpectralSet& big_omega);

/// Blocks of L = [[D0, B], [B^T, D1]] in a reference frame together with a
/// candidate angular operator X : Ran(frame head) -> Ran(frame tail).
struct RiccatiData {
  Matrix D0;
  Matrix D1;
  Matrix B;
  Matrix X;
};

/// Splits L in the frame of `ang` (first rank columns vs the rest) and takes
/// X from the angular data. ang.X must be present.
RiccatiData riccati_data(const SymmetricMatrix& l, const AngularData& ang);

/// ||X D0 - D1 X + X B X - B^T||_2.
double riccati_residual(const RiccatiData& r);

struct TransformedSylvester {
  Matrix lambda0;  // (I+X^T X)^{1/2} (D0 + B X) (I+X^T X)^{-1/2}
  Matrix lambda1;  // (I+X X^T)^{1/2} (D1 - B^T X^T) (I+X X^T)^{-1/2}
  Matrix y;        // (I+X X^T)^{1/2} B^T (I+X^T X)^{1/2}
  double residual; // ||X lambda0 - lambda1 X - Y||_2
};

/// Requires riccati_residual(r) < 1e-8 (1 + ||L||); throws ValidationError
/// otherwise.
TransformedSylvester transformed_sylvester(const RiccatiData& r);
double transformed_sylvester_residual(const RiccatiData& r);

}  // namespace subpert
