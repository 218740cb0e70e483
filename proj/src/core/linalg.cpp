#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "errors.hpp"

namespace subpert {

SymmetricMatrix::SymmetricMatrix(Matrix m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError("symmetric matrix must be square and non-empty");
  }
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (!(asym < 1e-12)) {
    std::ostringstream os;
    os << "matrix is not symmetric (max |M - M^T| = " << asym << ")";
    throw ValidationError(os.str());
  }
  m_ = 0.5 * (m + m.transpose());
}

SymmetricMatrix SymmetricMatrix::symmetrized(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError("symmetric matrix must be square and non-empty");
  }
  return SymmetricMatrix(Matrix(0.5 * (m + m.transpose())), Trusted{});
}

SymmetricMatrix SymmetricMatrix::zero(int dim) {
  if (dim < 1) throw DimensionError("dimension must be positive");
  return SymmetricMatrix(Matrix::Zero(dim, dim), Trusted{});
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> values) {
  if (values.empty()) throw DimensionError("dimension must be positive");
  Matrix m = Matrix::Zero(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return SymmetricMatrix(std::move(m), Trusted{});
}

SymmetricMatrix SymmetricMatrix::operator+(const SymmetricMatrix& o) const {
  if (o.dim() != dim()) throw DimensionError("dimension mismatch in sum");
  return SymmetricMatrix(Matrix(m_ + o.m_), Trusted{});
}

SymmetricMatrix SymmetricMatrix::operator-(const SymmetricMatrix& o) const {
  if (o.dim() != dim()) throw DimensionError("dimension mismatch in difference");
  return SymmetricMatrix(Matrix(m_ - o.m_), Trusted{});
}

SymmetricMatrix SymmetricMatrix::scaled(double s) const {
  return SymmetricMatrix(Matrix(s * m_), Trusted{});
}

EigenDecomposition eig_sym(const SymmetricMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(),
                                               Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericError("symmetric eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Vector eigenvalues_sym(const SymmetricMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(),
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("symmetric eigensolver did not converge");
  }
  return solver.eigenvalues();
}

namespace {

double symmetric_spectral_radius(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("symmetric eigensolver did not converge");
  }
  const Vector& ev = solver.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

}  // namespace

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == m.cols() && m == m.transpose()) {
    return symmetric_spectral_radius(m);
  }
  // The largest eigenvalue of the Gram matrix carries full relative accuracy.
  const Matrix gram = m.rows() >= m.cols() ? Matrix(m.transpose() * m)
                                           : Matrix(m * m.transpose());
  return std::sqrt(symmetric_spectral_radius(gram));
}

double operator_norm(const SymmetricMatrix& m) {
  return symmetric_spectral_radius(m.matrix());
}

SpectralSet SpectralSet::from_intervals(std::vector<Interval> intervals) {
  for (const auto& iv : intervals) {
    if (!(iv.lo <= iv.hi)) {
      std::ostringstream os;
      os << "interval [" << iv.lo << ", " << iv.hi << "] has lo > hi";
      throw ValidationError(os.str());
    }
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  SpectralSet s;
  for (const auto& iv : intervals) {
    if (!s.intervals_.empty() && iv.lo <= s.intervals_.back().hi) {
      s.intervals_.back().hi = std::max(s.intervals_.back().hi, iv.hi);
    } else {
      s.intervals_.push_back(iv);
    }
  }
  return s;
}

SpectralSet SpectralSet::points(std::span<const double> values) {
  std::vector<Interval> iv;
  iv.reserve(values.size());
  for (double v : values) iv.push_back({v, v});
  return from_intervals(std::move(iv));
}

bool SpectralSet::contains(double x, double tol) const {
  return distance(x) <= tol;
}

double SpectralSet::distance(double x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& iv : intervals_) {
    if (x < iv.lo) {
      best = std::min(best, iv.lo - x);
      break;  // sorted: later intervals are further right
    }
    if (x <= iv.hi) return 0.0;
    best = x - iv.hi;
  }
  return best;
}

SpectralSet SpectralSet::neighborhood(double r) const {
  if (!(r >= 0.0)) throw ValidationError("neighbourhood radius must be >= 0");
  std::vector<Interval> iv;
  iv.reserve(intervals_.size());
  for (const auto& i : intervals_) iv.push_back({i.lo - r, i.hi + r});
  return from_intervals(std::move(iv));
}

bool SpectralSet::subset_of(const SpectralSet& other, double tol) const {
  const SpectralSet wide = other.neighborhood(tol);
  for (const auto& iv : intervals_) {
    const bool covered =
        std::any_of(wide.intervals_.begin(), wide.intervals_.end(),
                    [&](const Interval& w) {
                      return w.lo <= iv.lo && iv.hi <= w.hi;
                    });
    if (!covered) return false;
  }
  return true;
}

double distance(const SpectralSet& a, const SpectralSet& b) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& x : a.intervals()) {
    for (const auto& y : b.intervals()) {
      double gap = 0.0;
      if (x.hi < y.lo) {
        gap = y.lo - x.hi;
      } else if (y.hi < x.lo) {
        gap = x.lo - y.hi;
      }
      best = std::min(best, gap);
    }
  }
  return best;
}

}  // namespace subpert

namespace subpert {

Matrix gram_power(const Matrix& m, double p) {
  const auto gram = SymmetricMatrix::symmetrized(
      Matrix::Identity(m.cols(), m.cols()) + m.transpose() * m);
  return spectral_function(gram, [p](double v) { return std::pow(v, p); });
}

}  // namespace subpert
