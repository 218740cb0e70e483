#pragma once

// Angles and rotations between subspaces, all in radians.

#include <optional>

#include "projector.hpp"

namespace subpert {

/// asin ||P - Q||, in [0, pi/2].
double maximal_angle(const Projector& p, const Projector& q);

/// asin ||Q^perp P||. Asymmetric; requires rank(P) >= 1.
double relative_angle(const Projector& p, const Projector& q);

/// Graph representation of Ran Q over Ran P. X and Theta are expressed in
/// P's adapted frame (P.basis() | P.complement_basis()) and are therefore
/// frame dependent; theta is not.
struct AngularData {
  double theta = 0.0;
  std::optional<Matrix> X;      // corank(P) x rank(P) angular operator
  std::optional<Matrix> Theta;  // rank(P) x rank(P) operator angle
  Matrix frame;                 // P-adapted orthogonal frame
  double reconstruction_residual = 0.0;
  /// Estimated norm of the inverted graph block (about 1 / cos theta); set
  /// when theta is within 0.01 of pi/2.
  std::optional<double> condition;
};

AngularData angular_data(const Projector& p, const Projector& q);

/// Unique direct rotation U from Ran P to Ran Q (acute case only):
/// QU = UP, U^2 = (Q^perp - Q)(P^perp - P), Re U >= 0.
Matrix direct_rotation(const Projector& p, const Projector& q);

/// sup |arg z| over the spectrum of an orthogonal matrix, from
/// cos(angle) = min spec(Re S).
double spectral_angle(const Matrix& s);

}  // namespace subpert
