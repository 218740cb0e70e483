#include <gtest/gtest.h>

#include <cmath>

#include "bounds.hpp"
#include "errors.hpp"
#include "oracles.hpp"
#include "random.hpp"
#include "subspace.hpp"

using namespace subpert;

namespace {

Projector line(double alpha) {
  Matrix b(2, 1);
  b << std::cos(alpha), std::sin(alpha);
  return Projector::from_basis(b);
}

Projector axes(int n, std::initializer_list<int> idx) {
  Matrix b = Matrix::Zero(n, static_cast<int>(idx.size()));
  int c = 0;
  for (int i : idx) b(i, c++) = 1.0;
  return Projector::from_basis(b);
}

Projector random_subspace(int n, int r, SplitMix64& rng) {
  return Projector::from_basis(random_orthonormal(n, r, rng));
}

// Q = span of basis(P) tilted by a small random X, so the pair is acute.
Projector tilted(const Projector& p, double scale, SplitMix64& rng) {
  const Matrix x = scale * random_normal(p.dim() - p.rank(), p.rank(), rng);
  const Matrix cols = p.basis() + p.complement_basis() * x;
  Eigen::HouseholderQR<Matrix> qr(cols);
  const Matrix q = qr.householderQ() * Matrix::Identity(p.dim(), p.rank());
  return Projector::from_basis(q);
}

double oracle_gap(const Projector& p, const Projector& q) {
  return oracle::symmetric_norm(p.matrix() - q.matrix());
}

}  // namespace

TEST(MaximalAngle, Examples) {
  EXPECT_EQ(maximal_angle(line(0.0), line(0.0)), 0.0);
  EXPECT_NEAR(maximal_angle(line(0.0), line(0.3)), 0.3, 1e-14);
  EXPECT_NEAR(maximal_angle(line(0.0), line(kPi / 2)), kPi / 2, 1e-8);
  EXPECT_THROW(maximal_angle(line(0.0), axes(3, {0})), DimensionError);
}

TEST(MaximalAngle, SymmetryComplementAndBound) {
  SplitMix64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const int n = 2 + static_cast<int>(rng.below(9));
    const auto p = random_subspace(n, static_cast<int>(rng.below(n + 1)), rng);
    const auto q = random_subspace(n, static_cast<int>(rng.below(n + 1)), rng);
    EXPECT_NEAR(maximal_angle(p, q), maximal_angle(q, p), 1e-12);
    EXPECT_NEAR(operator_norm(Matrix(p.complement().matrix() - q.complement().matrix())),
                operator_norm(Matrix(p.matrix() - q.matrix())), 1e-12);
    EXPECT_LE(operator_norm(Matrix(p.matrix() - q.matrix())), 1.0 + 1e-12);
    EXPECT_NEAR(std::sin(maximal_angle(p, q)), oracle_gap(p, q), 1e-10);
  }
}

TEST(MaximalAngle, TriangleInequality) {
  SplitMix64 rng(2024);
  for (int k = 0; k < 1000; ++k) {
    const int n = 2 + static_cast<int>(rng.below(9));
    const auto p = random_subspace(n, static_cast<int>(rng.below(n + 1)), rng);
    const auto q = random_subspace(n, static_cast<int>(rng.below(n + 1)), rng);
    const auto r = random_subspace(n, static_cast<int>(rng.below(n + 1)), rng);
    EXPECT_LE(maximal_angle(p, q), maximal_angle(p, r) + maximal_angle(r, q) + 1e-9);
  }
}

TEST(RelativeAngle, Examples) {
  EXPECT_NEAR(relative_angle(line(0.2), line(0.2)), 0.0, 1e-15);
  const auto p = axes(3, {0, 1});
  const auto q = axes(3, {0});
  EXPECT_NEAR(relative_angle(p, q), kPi / 2, 1e-12);
  EXPECT_NEAR(relative_angle(q, p), 0.0, 1e-15);
  EXPECT_NEAR(relative_angle(line(0.0), line(0.3)), 0.3, 1e-14);
  EXPECT_NEAR(relative_angle(line(0.3), line(0.0)), 0.3, 1e-14);
  EXPECT_THROW(relative_angle(Projector::from_basis(Matrix(3, 0)), q), ValidationError);
}

TEST(RelativeAngle, MaximumOfBothSidesIsMaximalAngle) {
  SplitMix64 rng(3);
  for (int k = 0; k < 300; ++k) {
    const int n = 2 + static_cast<int>(rng.below(8));
    const auto p = random_subspace(n, 1 + static_cast<int>(rng.below(n)), rng);
    const auto q = random_subspace(n, 1 + static_cast<int>(rng.below(n)), rng);
    const double both = std::max(relative_angle(p, q), relative_angle(q, p));
    // Compare sines: near pi/2 the angles themselves lose digits to asin.
    EXPECT_NEAR(std::sin(both), std::sin(maximal_angle(p, q)), 1e-10);
  }
}

TEST(AngularData, Examples) {
  const auto same = angular_data(line(0.4), line(0.4));
  EXPECT_NEAR(same.theta, 0.0, 1e-15);
  ASSERT_TRUE(same.X);
  EXPECT_LT(same.X->norm(), 1e-15);
  EXPECT_LT(same.Theta->norm(), 1e-15);

  const auto a = angular_data(line(0.0), line(0.3));
  ASSERT_TRUE(a.X);
  ASSERT_EQ(a.X->rows(), 1);
  // The frame's complement vector may point either way along e2.
  EXPECT_NEAR(std::abs((*a.X)(0, 0)), std::tan(0.3), 1e-14);
  EXPECT_NEAR((*a.Theta)(0, 0), 0.3, 1e-14);

  const auto right = angular_data(line(0.0), line(kPi / 2));
  EXPECT_FALSE(right.X);
  EXPECT_FALSE(right.Theta);
  EXPECT_NEAR(right.theta, kPi / 2, 1e-8);

  const auto ranks = angular_data(axes(3, {0, 1}), axes(3, {0}));
  EXPECT_FALSE(ranks.X);
}

TEST(AngularData, RandomAcuteInvariants) {
  SplitMix64 rng(8);
  for (int k = 0; k < 200; ++k) {
    const int n = 2 + static_cast<int>(rng.below(12));
    const int r = 1 + static_cast<int>(rng.below(n - 1));
    const auto p = random_subspace(n, r, rng);
    const auto q = tilted(p, rng.uniform(0.01, 1.5), rng);
    const auto ang = angular_data(p, q);
    ASSERT_TRUE(ang.X);
    const double st = std::sin(ang.theta);
    EXPECT_NEAR(std::sin(operator_norm(*ang.Theta)), st, 1e-10);
    const double nx = operator_norm(*ang.X);
    EXPECT_NEAR(nx / std::sqrt(1 + nx * nx), st, 1e-10);
    EXPECT_LT(ang.reconstruction_residual, 1e-9);
    // Independent reconstruction: graph columns [I; X] in the frame.
    Matrix cols(n, r);
    cols << Matrix::Identity(r, r), *ang.X;
    const Matrix q_oracle = ang.frame * oracle::projector_of(cols) * ang.frame.transpose();
    EXPECT_LT(oracle::symmetric_norm(q_oracle - q.matrix()), 1e-9);
  }
}

TEST(AngularData, NearRightAngleReportsCondition) {
  const auto a = angular_data(line(0.0), line(kPi / 2 - 1e-3));
  ASSERT_TRUE(a.X);
  ASSERT_TRUE(a.condition);
  EXPECT_GT(*a.condition, 100.0);
}

TEST(DirectRotation, Examples) {
  const auto p = line(0.25);
  const Matrix u = direct_rotation(p, p);
  EXPECT_LT((u - Matrix::Identity(2, 2)).norm(), 1e-14);

  const Matrix rot = direct_rotation(line(0.0), line(0.3));
  Matrix expected(2, 2);
  expected << std::cos(0.3), -std::sin(0.3), std::sin(0.3), std::cos(0.3);
  EXPECT_LT((rot - expected).norm(), 1e-14);

  EXPECT_THROW(direct_rotation(line(0.0), line(kPi / 2)), ValidationError);
}

TEST(DirectRotation, RandomAcuteProperties) {
  SplitMix64 rng(99);
  for (int k = 0; k < 200; ++k) {
    const int n = 2 + static_cast<int>(rng.below(10));
    const int r = 1 + static_cast<int>(rng.below(n - 1));
    const auto p = random_subspace(n, r, rng);
    const auto q = tilted(p, rng.uniform(0.01, 2.0), rng);
    const double theta = maximal_angle(p, q);
    const Matrix u = direct_rotation(p, q);
    const Matrix id = Matrix::Identity(n, n);
    EXPECT_LT(operator_norm(Matrix(u.transpose() * u - id)), 1e-10);
    EXPECT_LT(operator_norm(Matrix(q.matrix() * u - u * p.matrix())), 1e-9);
    const Matrix rhs = (q.complement().matrix() - q.matrix()) *
                       (p.complement().matrix() - p.matrix());
    EXPECT_LT(operator_norm(Matrix(u * u - rhs)), 1e-9);
    const auto re = oracle::jacobi_eigenvalues(0.5 * (u + u.transpose()));
    EXPECT_NEAR(re.front(), std::cos(theta), 1e-9);
    EXPECT_GE(re.front(), -1e-12);
    EXPECT_NEAR(spectral_angle(u), theta, 1e-9);
    EXPECT_NEAR(operator_norm(Matrix(u - id)), 2 * std::sin(theta / 2), 1e-9);
  }
}

TEST(DirectRotation, ExtremalityAmongRotationsIntoQ) {
  SplitMix64 rng(17);
  for (int k = 0; k < 30; ++k) {
    const int n = 3 + static_cast<int>(rng.below(6));
    const int r = 1 + static_cast<int>(rng.below(n - 1));
    const auto p = random_subspace(n, r, rng);
    const auto q = tilted(p, rng.uniform(0.05, 1.0), rng);
    const double theta = maximal_angle(p, q);
    const Matrix u = direct_rotation(p, q);
    const Matrix f = p.frame();
    for (int t = 0; t < 20; ++t) {
      // Block-diagonal unitary in the P-frame commutes with P.
      Matrix w = Matrix::Zero(n, n);
      w.topLeftCorner(r, r) = random_orthonormal(r, r, rng);
      w.bottomRightCorner(n - r, n - r) = random_orthonormal(n - r, n - r, rng);
      const Matrix s = u * f * w * f.transpose();
      EXPECT_LT(operator_norm(Matrix(q.matrix() * s - s * p.matrix())), 1e-9);
      EXPECT_GE(spectral_angle(s), theta - 1e-9);
    }
  }
}

TEST(SpectralAngle, Examples) {
  EXPECT_EQ(spectral_angle(Matrix(Matrix::Identity(3, 3))), 0.0);
  Matrix r(2, 2);
  r << std::cos(0.7), -std::sin(0.7), std::sin(0.7), std::cos(0.7);
  EXPECT_NEAR(spectral_angle(r), 0.7, 1e-14);
  EXPECT_NEAR(spectral_angle(Matrix(-Matrix::Identity(2, 2))), kPi, 1e-15);
  Matrix big(2, 2);
  big << std::cos(2.5), -std::sin(2.5), std::sin(2.5), std::cos(2.5);
  EXPECT_NEAR(spectral_angle(big), 2.5, 1e-12);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = 0.1;
  EXPECT_THROW(spectral_angle(bad), ValidationError);
  EXPECT_THROW(spectral_angle(Matrix(2, 3)), DimensionError);
}
