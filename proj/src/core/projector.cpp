#include "projector.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "errors.hpp"

namespace subpert {
namespace {

constexpr double kOrthoTol = 1e-10;

void require_orthonormal(const Matrix& b, const char* what) {
  if (b.cols() == 0) return;
  const double r =
      (b.transpose() * b - Matrix::Identity(b.cols(), b.cols())).cwiseAbs()
          .maxCoeff();
  if (!(r < kOrthoTol)) {
    std::ostringstream os;
    os << what << " columns are not orthonormal (residual " << r << ")";
    throw ValidationError(os.str());
  }
}

Matrix columns(const Matrix& m, const std::vector<int>& idx) {
  Matrix out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(k) = m.col(idx[k]);
  return out;
}

}  // namespace

Projector::Projector(Matrix basis, Matrix complement)
    : basis_(std::move(basis)), complement_(std::move(complement)) {
  matrix_ = basis_ * basis_.transpose();
}

Projector Projector::from_basis(Matrix basis) {
  if (basis.rows() == 0) throw DimensionError("projector needs positive dim");
  if (basis.cols() > basis.rows()) {
    throw DimensionError("basis has more columns than rows");
  }
  require_orthonormal(basis, "basis");
  const Eigen::Index n = basis.rows();
  const Eigen::Index r = basis.cols();
  Matrix complement;
  if (r == 0) {
    complement = Matrix::Identity(n, n);
  } else {
    Eigen::HouseholderQR<Matrix> qr(basis);
    const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    complement = q.rightCols(n - r);
  }
  return Projector(std::move(basis), std::move(complement));
}

Projector Projector::from_split(Matrix basis, Matrix complement) {
  if (basis.rows() != complement.rows() ||
      basis.cols() + complement.cols() != basis.rows()) {
    throw DimensionError("basis and complement do not fill the space");
  }
  Matrix frame(basis.rows(), basis.rows());
  frame << basis, complement;
  require_orthonormal(frame, "frame");
  return Projector(std::move(basis), std::move(complement));
}

Matrix Projector::frame() const {
  Matrix f(dim(), dim());
  f << basis_, complement_;
  return f;
}

Projector Projector::complement() const { return Projector(complement_, basis_); }

double default_tolerance(const SymmetricMatrix& a) {
  return 1e-9 * (1.0 + operator_norm(a));
}

SpectralSplit classify_eigenvalues(const Vector& eigenvalues,
                                   const SpectralSet& s, double tol) {
  SpectralSplit split;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double lambda = eigenvalues(i);
    const double dist = s.distance(lambda);
    if (dist <= tol) {
      split.inside.push_back(static_cast<int>(i));
    } else if (dist > 2.0 * tol) {
      split.outside.push_back(static_cast<int>(i));
    } else {
      std::ostringstream os;
      os.precision(17);
      os << "eigenvalue " << lambda << " straddles the boundary of the "
         << "spectral set (distance " << dist << ", tol " << tol << ")";
      throw AmbiguityError(os.str());
    }
  }
  return split;
}

Projector projector_from_split(const EigenDecomposition& eig,
                               const SpectralSplit& split) {
  return Projector::from_split(columns(eig.eigenvectors, split.inside),
                               columns(eig.eigenvectors, split.outside));
}

Projector spectral_projection(const SymmetricMatrix& a, const SpectralSet& s,
                              double tol) {
  const auto eig = eig_sym(a);
  return projector_from_split(eig, classify_eigenvalues(eig.eigenvalues, s, tol));
}

Projector spectral_projection(const SymmetricMatrix& a, const SpectralSet& s) {
  return spectral_projection(a, s, default_tolerance(a));
}

double split_gap(const Vector& eigenvalues, const SpectralSplit& split) {
  if (split.inside.empty() || split.outside.empty()) {
    throw ValidationError(
        "degenerate partition: spectral set selects none or all eigenvalues");
  }
  double d = std::numeric_limits<double>::infinity();
  for (int i : split.inside) {
    for (int j : split.outside) {
      d = std::min(d, std::abs(eigenvalues(i) - eigenvalues(j)));
    }
  }
  return d;
}

double gap(const SymmetricMatrix& a, const SpectralSet& sigma) {
  const Vector ev = eigenvalues_sym(a);
  return split_gap(ev, classify_eigenvalues(ev, sigma, default_tolerance(a)));
}

SpectralSet eigenvalue_set(const Vector& eigenvalues,
                           const std::vector<int>& indices) {
  std::vector<double> pts;
  pts.reserve(indices.size());
  for (int i : indices) pts.push_back(eigenvalues(i));
  return SpectralSet::points(pts);
}

}  // namespace subpert
