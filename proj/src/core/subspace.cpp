#include "subspace.hpp"

#include <cmath>
#include <sstream>

#include "bounds.hpp"
#include "errors.hpp"

namespace subpert {
namespace {

constexpr double kClamp = 1e-12;

void require_same_dim(const Projector& p, const Projector& q) {
  if (p.dim() != q.dim()) {
    std::ostringstream os;
    os << "ambient dimension mismatch: " << p.dim() << " vs " << q.dim();
    throw DimensionError(os.str());
  }
}

double asin_of_norm(double nrm) {
  if (nrm > 1.0 && nrm <= 1.0 + kClamp) nrm = 1.0;
  return checked_asin(nrm);
}

}  // namespace

double maximal_angle(const Projector& p, const Projector& q) {
  require_same_dim(p, q);
  // Unequal ranks leave a unit vector of one range orthogonal to the other.
  if (p.rank() != q.rank()) return kPi / 2;
  const int r = p.rank();
  if (r == 0 || r == p.dim()) return 0.0;
  // For equal ranks ||P - Q|| = ||P^perp Q|| is the largest principal sine and
  // the smallest singular value of basis(P)^T basis(Q) its cosine. atan2 of
  // the pair stays accurate where asin of a norm near 1 does not.
  const double sn =
      operator_norm(Matrix(p.complement_basis().transpose() * q.basis()));
  const Matrix c = p.basis().transpose() * q.basis();
  const Eigen::JacobiSVD<Matrix> svd(c);
  const double cs = svd.singularValues()(r - 1);
  return std::atan2(sn, cs);
}

double relative_angle(const Projector& p, const Projector& q) {
  require_same_dim(p, q);
  if (p.rank() == 0) {
    throw ValidationError("relative angle undefined for a zero subspace");
  }
  // ||Q^perp P|| = ||basis(Q^perp)^T basis(P)|| since both are isometries.
  if (q.rank() == q.dim()) return 0.0;
  const Matrix residual = q.complement_basis().transpose() * p.basis();
  return asin_of_norm(operator_norm(residual));
}

AngularData angular_data(const Projector& p, const Projector& q) {
  require_same_dim(p, q);
  AngularData out;
  out.frame = p.frame();
  out.theta = maximal_angle(p, q);
  if (p.rank() != q.rank() || std::sin(out.theta) >= 1.0 - kClamp) return out;

  const int r = p.rank();
  const int n = p.dim();
  if (r == 0 || r == n) {
    // Both subspaces are trivial or the whole space: X is empty.
    out.X = Matrix::Zero(n - r, r);
    out.Theta = Matrix::Zero(r, r);
    return out;
  }

  const Matrix w_top = p.basis().transpose() * q.basis();
  const Matrix w_bot = p.complement_basis().transpose() * q.basis();
  Eigen::PartialPivLU<Matrix> lu(w_top.transpose());
  const double rcond = lu.rcond();
  // Estimated ||W_top^{-1}||_1; grows like 1 / cos(theta).
  if (out.theta > kPi / 2 - 0.01) {
    out.condition = 1.0 / (rcond * w_top.cwiseAbs().rowwise().sum().maxCoeff());
  }
  if (!(rcond > 1e-14) && out.theta < kPi / 2 - 1e-6) {
    throw InternalError("graph block is singular although the pair is acute");
  }
  Matrix x = lu.solve(w_bot.transpose()).transpose();
  if (!x.allFinite()) {
    if (out.theta < kPi / 2 - 1e-6) {
      throw InternalError("non-finite angular operator for an acute pair");
    }
    return out;
  }

  const auto gram = SymmetricMatrix::symmetrized(x.transpose() * x);
  out.Theta = spectral_function(gram, [](double s) {
    return std::atan(std::sqrt(std::max(s, 0.0)));
  });

  // Rebuild Q from X in the adapted frame and compare.
  const Matrix g = gram_power(x, -1.0);
  Matrix q_adapted(n, n);
  q_adapted.topLeftCorner(r, r) = g;
  q_adapted.topRightCorner(r, n - r) = g * x.transpose();
  q_adapted.bottomLeftCorner(n - r, r) = x * g;
  q_adapted.bottomRightCorner(n - r, n - r) = x * g * x.transpose();
  const Matrix q_frame = out.frame.transpose() * q.matrix() * out.frame;
  out.reconstruction_residual = operator_norm(Matrix(q_adapted - q_frame));
  out.X = std::move(x);
  return out;
}

Matrix direct_rotation(const Projector& p, const Projector& q) {
  const AngularData ang = angular_data(p, q);
  if (!ang.X) {
    std::ostringstream os;
    os << "direct rotation requires an acute pair (theta = " << ang.theta
       << ")";
    throw ValidationError(os.str());
  }
  const Matrix& x = *ang.X;
  const int r = p.rank();
  const int n = p.dim();
  const Matrix g0 = gram_power(x, -0.5);              // (I + X^T X)^{-1/2}
  const Matrix g1 = gram_power(x.transpose(), -0.5);  // (I + X X^T)^{-1/2}
  Matrix u(n, n);
  u.topLeftCorner(r, r) = g0;
  u.topRightCorner(r, n - r) = -x.transpose() * g1;
  u.bottomLeftCorner(n - r, r) = x * g0;
  u.bottomRightCorner(n - r, n - r) = g1;
  return ang.frame * u * ang.frame.transpose();
}

double spectral_angle(const Matrix& s) {
  if (s.rows() != s.cols() || s.rows() == 0) {
    throw DimensionError("spectral angle needs a non-empty square matrix");
  }
  const double defect = operator_norm(
      Matrix(s.transpose() * s - Matrix::Identity(s.rows(), s.cols())));
  if (!(defect < 1e-8)) {
    std::ostringstream os;
    os << "matrix is not orthogonal (||S^T S - I|| = " << defect << ")";
    throw ValidationError(os.str());
  }
  const auto re = SymmetricMatrix::symmetrized(s);
  const double c = eigenvalues_sym(re)(0);
  if (c > 0.0) {
    // Every eigenvalue argument is below pi/2, so the largest |sin| belongs
    // to the extremal one; atan2 keeps accuracy for small angles.
    const double sn = operator_norm(Matrix(0.5 * (s - s.transpose())));
    return std::atan2(sn, c);
  }
  return checked_acos(c);
}

}  // namespace subpert
