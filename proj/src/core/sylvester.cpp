#include "sylvester.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bounds.hpp"
#include "errors.hpp"

namespace subpert {
namespace {

constexpr double kCertSlack = 1e-9;

Matrix assemble(const RiccatiData& r) {
  const Eigen::Index n0 = r.D0.rows();
  const Eigen::Index n1 = r.D1.rows();
  Matrix l(n0 + n1, n0 + n1);
  l.topLeftCorner(n0, n0) = r.D0;
  l.topRightCorner(n0, n1) = r.B;
  l.bottomLeftCorner(n1, n0) = r.B.transpose();
  l.bottomRightCorner(n1, n1) = r.D1;
  return l;
}

void require_riccati_dims(const RiccatiData& r) {
  const auto n0 = r.D0.rows();
  const auto n1 = r.D1.rows();
  if (r.D0.cols() != n0 || r.D1.cols() != n1 || r.B.rows() != n0 ||
      r.B.cols() != n1 || r.X.rows() != n1 || r.X.cols() != n0) {
    throw DimensionError("Riccati blocks have inconsistent dimensions");
  }
}

}  // namespace

SylvesterProblem::SylvesterProblem(SymmetricMatrix lambda0,
                                   SymmetricMatrix lambda1, Matrix y)
    : lambda0_(std::move(lambda0)),
      lambda1_(std::move(lambda1)),
      y_(std::move(y)),
      eig0_(eig_sym(lambda0_)),
      eig1_(eig_sym(lambda1_)) {
  if (y_.rows() != lambda1_.dim() || y_.cols() != lambda0_.dim()) {
    throw DimensionError("Sylvester right-hand side must be n1 x n0");
  }
  delta_ = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < eig0_.eigenvalues.size(); ++i) {
    for (Eigen::Index j = 0; j < eig1_.eigenvalues.size(); ++j) {
      delta_ = std::min(
          delta_, std::abs(eig0_.eigenvalues(i) - eig1_.eigenvalues(j)));
    }
  }
}

double sylvester_residual(const SylvesterProblem& p, const Matrix& x) {
  return operator_norm(Matrix(x * p.lambda0().matrix() -
                              p.lambda1().matrix() * x - p.y()));
}

Matrix solve_sylvester(const SylvesterProblem& p) {
  const double scale =
      1.0 + operator_norm(p.lambda0()) + operator_norm(p.lambda1());
  if (!(p.delta() > 1e-8 * scale)) {
    std::ostringstream os;
    os << "Sylvester spectra too close: delta = " << p.delta();
    throw NumericError(os.str());
  }
  const Matrix& q0 = p.eig0().eigenvectors;
  const Matrix& q1 = p.eig1().eigenvectors;
  const Vector& d0 = p.eig0().eigenvalues;
  const Vector& d1 = p.eig1().eigenvalues;
  Matrix xt = q1.transpose() * p.y() * q0;
  for (Eigen::Index i = 0; i < xt.rows(); ++i) {
    for (Eigen::Index j = 0; j < xt.cols(); ++j) {
      xt(i, j) /= d0(j) - d1(i);
    }
  }
  return q1 * xt * q0.transpose();
}

SylvesterBoundReport sylvester_bound_check(const SylvesterProblem& p,
                                           const Matrix& x) {
  if (x.rows() != p.y().rows() || x.cols() != p.y().cols()) {
    throw DimensionError("candidate solution has the wrong shape");
  }
  const double ynorm = operator_norm(p.y());
  const double res = sylvester_residual(p, x);
  if (!(res < 1e-9 * (1.0 + ynorm))) {
    std::ostringstream os;
    os << "stale Sylvester solution: residual " << res;
    throw NumericError(os.str());
  }
  SylvesterBoundReport rep{};
  rep.lhs = p.delta() * operator_norm(x);
  rep.rhs = 0.5 * kPi * ynorm;
  rep.pass = rep.lhs <= rep.rhs + kCertSlack;
  return rep;
}

CrossProjectionReport cross_projection_check(const SymmetricMatrix& a,
                                             const SymmetricMatrix& b,
                                             const SpectralSet& omega,
                                             const SpectralSet& big_omega) {
  if (a.dim() != b.dim()) throw DimensionError("A and B must share a dimension");
  CrossProjectionReport rep{};
  rep.rhs = 0.5 * kPi * operator_norm(b - a);
  rep.distance = distance(omega, big_omega);
  if (!(rep.distance > 0.0) || std::isinf(rep.distance)) {
    // Zero distance makes the estimate vacuous; an empty set makes the
    // projection product vanish.
    rep.trivial = true;
    rep.lhs = 0.0;
    rep.pass = true;
    return rep;
  }
  const Projector pa = spectral_projection(a, omega);
  const Projector pb = spectral_projection(b, big_omega);
  rep.lhs = rep.distance *
            operator_norm(Matrix(pa.basis().transpose() * pb.basis()));
  rep.pass = rep.lhs <= rep.rhs + kCertSlack;
  return rep;
}

RiccatiData riccati_data(const SymmetricMatrix& l, const AngularData& ang) {
  if (!ang.X) throw ValidationError("angular operator absent (non-acute pair)");
  if (ang.frame.rows() != l.dim()) {
    throw DimensionError("frame and operator dimensions differ");
  }
  const Eigen::Index r = ang.X->cols();
  const Eigen::Index n = l.dim();
  const Matrix lf = ang.frame.transpose() * l.matrix() * ang.frame;
  RiccatiData out;
  out.D0 = lf.topLeftCorner(r, r);
  out.B = lf.topRightCorner(r, n - r);
  out.D1 = lf.bottomRightCorner(n - r, n - r);
  out.X = *ang.X;
  return out;
}

double riccati_residual(const RiccatiData& r) {
  require_riccati_dims(r);
  return operator_norm(Matrix(r.X * r.D0 - r.D1 * r.X + r.X * r.B * r.X -
                              r.B.transpose()));
}

TransformedSylvester transformed_sylvester(const RiccatiData& r) {
  require_riccati_dims(r);
  const double lnorm = operator_norm(assemble(r));
  const double ric = riccati_residual(r);
  if (!(ric < 1e-8 * (1.0 + lnorm))) {
    std::ostringstream os;
    os << "X is not a Riccati solution (residual " << ric << ")";
    throw ValidationError(os.str());
  }
  const Matrix& x = r.X;
  const Matrix z0 = r.D0 + r.B * x;
  const Matrix z1 = r.D1 - r.B.transpose() * x.transpose();
  const Matrix s0 = gram_power(x, 0.5);                // (I + X^T X)^{1/2}
  const Matrix s0_inv = gram_power(x, -0.5);
  const Matrix s1 = gram_power(x.transpose(), 0.5);    // (I + X X^T)^{1/2}
  const Matrix s1_inv = gram_power(x.transpose(), -0.5);
  TransformedSylvester out;
  out.lambda0 = s0 * z0 * s0_inv;
  out.lambda1 = s1 * z1 * s1_inv;
  out.y = s1 * r.B.transpose() * s0;
  out.residual = operator_norm(Matrix(x * out.lambda0 - out.lambda1 * x - out.y));
  return out;
}

double transformed_sylvester_residual(const RiccatiData& r) {
  return transformed_sylvester(r).residual;
}

}  // namespace subpert
