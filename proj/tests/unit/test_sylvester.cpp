#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "bounds.hpp"
#include "errors.hpp"
#include "oracles.hpp"
#include "perturbation.hpp"
#include "random.hpp"
#include "subspace.hpp"
#include "sylvester.hpp"

using namespace subpert;

namespace {

SymmetricMatrix diag(std::vector<double> d) { return SymmetricMatrix::diagonal(d); }

// Symmetric matrix with prescribed eigenvalues in a random basis.
SymmetricMatrix with_spectrum(const std::vector<double>& ev, SplitMix64& rng) {
  const int n = static_cast<int>(ev.size());
  const Matrix q = random_orthonormal(n, n, rng);
  const Vector d = Eigen::Map<const Vector>(ev.data(), n);
  return SymmetricMatrix::symmetrized(q * d.asDiagonal() * q.transpose());
}

}  // namespace

TEST(Sylvester, ScalarAndDiagonalExamples) {
  Matrix y(1, 1);
  y << 1;
  const SylvesterProblem p(diag({0}), diag({1}), y);
  EXPECT_EQ(p.delta(), 1.0);
  const Matrix x = solve_sylvester(p);
  EXPECT_DOUBLE_EQ(x(0, 0), -1.0);
  const auto rep = sylvester_bound_check(p, x);
  EXPECT_DOUBLE_EQ(rep.lhs, 1.0);
  EXPECT_DOUBLE_EQ(rep.rhs, kPi / 2);
  EXPECT_TRUE(rep.pass);

  Matrix y2(1, 2);
  y2 << 1, 1;
  const Matrix x2 = solve_sylvester(SylvesterProblem(diag({0, 0}), diag({2}), y2));
  EXPECT_NEAR(x2(0, 0), -0.5, 1e-15);
  EXPECT_NEAR(x2(0, 1), -0.5, 1e-15);
}

TEST(Sylvester, MatchesKroneckerOracle) {
  SplitMix64 rng(314);
  for (int k = 0; k < 200; ++k) {
    const int n0 = 1 + static_cast<int>(rng.below(5));
    const int n1 = 1 + static_cast<int>(rng.below(5));
    const auto l0 = random_symmetric(n0, rng.next());
    const auto l1 = SymmetricMatrix::symmetrized(random_symmetric(n1, rng.next()).matrix() +
                                                 5.0 * Matrix::Identity(n1, n1));
    const Matrix y = random_normal(n1, n0, rng);
    const SylvesterProblem p(l0, l1, y);
    const Matrix x = solve_sylvester(p);
    const Matrix xo = oracle::kronecker_sylvester(l0.matrix(), l1.matrix(), y);
    EXPECT_LT(oracle::power_norm(x - xo), 1e-9);
    EXPECT_LT(sylvester_residual(p, x), 1e-9 * (1 + operator_norm(y)));
  }
}

TEST(Sylvester, DeltaMatchesEigenvalueOracle) {
  SplitMix64 rng(5);
  for (int k = 0; k < 30; ++k) {
    const auto l0 = random_symmetric(4, rng.next());
    const auto l1 = random_symmetric(3, rng.next());
    const SylvesterProblem p(l0, l1, Matrix::Zero(3, 4));
    const auto e0 = oracle::jacobi_eigenvalues(l0.matrix());
    const auto e1 = oracle::jacobi_eigenvalues(l1.matrix());
    double d = 1e300;
    for (double a : e0)
      for (double b : e1) d = std::min(d, std::abs(a - b));
    EXPECT_NEAR(p.delta(), d, 1e-10);
  }
}

TEST(Sylvester, BoundHoldsOnEnsemble) {
  SplitMix64 rng(2718);
  for (int k = 0; k < 1000; ++k) {
    const int n0 = 1 + static_cast<int>(rng.below(6));
    const int n1 = 1 + static_cast<int>(rng.below(6));
    // Interlaced spectra make the bound work hardest.
    std::vector<double> e0, e1;
    for (int i = 0; i < n0; ++i) e0.push_back(rng.uniform(-3, 3));
    for (int i = 0; i < n1; ++i) e1.push_back(rng.uniform(-3, 3));
    const SylvesterProblem p(with_spectrum(e0, rng), with_spectrum(e1, rng),
                             random_normal(n1, n0, rng));
    if (p.delta() < 1e-4) continue;
    const auto rep = sylvester_bound_check(p, solve_sylvester(p));
    EXPECT_TRUE(rep.pass) << rep.lhs << " > " << rep.rhs;
  }
}

TEST(Sylvester, NearResonantStillBounded) {
  SplitMix64 rng(12);
  for (int k = 0; k < 50; ++k) {
    const double eps = std::pow(10.0, -2.0 - 5.0 * rng.uniform());
    const SylvesterProblem p(with_spectrum({0.0, 1.0, 2.0}, rng),
                             with_spectrum({1.0 + eps, 3.0}, rng),
                             random_normal(2, 3, rng));
    EXPECT_NEAR(p.delta(), eps, 1e-9);
    const auto rep = sylvester_bound_check(p, solve_sylvester(p));
    EXPECT_TRUE(rep.pass);
  }
}

TEST(Sylvester, Errors) {
  Matrix y(1, 1);
  y << 1;
  EXPECT_THROW(solve_sylvester(SylvesterProblem(diag({1}), diag({1 + 1e-12}), y)), NumericError);
  EXPECT_THROW(SylvesterProblem(diag({0}), diag({1}), Matrix(2, 1)), DimensionError);
  const SylvesterProblem p(diag({0}), diag({1}), y);
  Matrix wrong(1, 1);
  wrong << 0.5;
  EXPECT_THROW(sylvester_bound_check(p, wrong), NumericError);
  EXPECT_THROW(sylvester_bound_check(p, Matrix(2, 2)), DimensionError);
}

TEST(CrossProjection, Examples) {
  const auto a = diag({0, 1});
  const auto same = cross_projection_check(a, a, SpectralSet::from_intervals({{-0.2, 0.2}}),
                                           SpectralSet::from_intervals({{0.8, 1.2}}));
  EXPECT_NEAR(same.lhs, 0.0, 1e-15);
  EXPECT_TRUE(same.pass);
  Matrix c(2, 2);
  c << 0, 0.1, 0.1, 0;
  const auto b = SymmetricMatrix(a.matrix() + c);
  const auto rep = cross_projection_check(a, b, SpectralSet::from_intervals({{-0.2, 0.2}}),
                                          SpectralSet::from_intervals({{0.8, 1.2}}));
  EXPECT_DOUBLE_EQ(rep.distance, 0.6);
  EXPECT_NEAR(rep.rhs, 0.05 * kPi, 1e-15);
  // E_A(omega) = e1 e1^T; E_B(Omega) is the upper eigenvector of B.
  const double phi = 0.5 * std::atan(0.2);
  EXPECT_NEAR(rep.lhs, 0.6 * std::sin(phi), 1e-12);
  EXPECT_TRUE(rep.pass);
  const auto overlap = cross_projection_check(a, b, SpectralSet::from_intervals({{0, 1}}),
                                              SpectralSet::from_intervals({{1, 2}}));
  EXPECT_TRUE(overlap.trivial);
  EXPECT_TRUE(overlap.pass);
  EXPECT_THROW(cross_projection_check(a, diag({0, 1, 2}), SpectralSet(), SpectralSet()),
               DimensionError);
}

TEST(CrossProjection, EnsembleWithRandomIntervals) {
  SplitMix64 rng(4242);
  int checked = 0;
  for (int k = 0; k < 1000; ++k) {
    const int n = 2 + static_cast<int>(rng.below(9));
    const auto a = random_symmetric(n, rng.next());
    const auto c = random_symmetric_with_norm(n, rng.uniform(0.0, 1.5), rng.next());
    const auto b = a + c;
    const double lo = rng.uniform(-2.5, 1.5);
    const double w = rng.uniform(0.1, 1.5);
    const double sep = rng.uniform(0.05, 1.0);
    const auto omega = SpectralSet::from_intervals({{lo, lo + w}});
    const auto big = SpectralSet::from_intervals({{-10, lo - sep}, {lo + w + sep, 10}});
    try {
      const auto rep = cross_projection_check(a, b, omega, big);
      EXPECT_TRUE(rep.pass) << rep.lhs << " > " << rep.rhs;
      ++checked;
    } catch (const AmbiguityError&) {
      // An eigenvalue within tolerance of an endpoint; vanishingly rare.
    }
  }
  EXPECT_GT(checked, 990);
}

TEST(Riccati, TrivialAndNegativeControl) {
  RiccatiData zero{Matrix::Identity(2, 2), 3 * Matrix::Identity(1, 1), Matrix::Zero(2, 1),
                   Matrix::Zero(1, 2)};
  EXPECT_EQ(riccati_residual(zero), 0.0);
  EXPECT_EQ(transformed_sylvester_residual(zero), 0.0);
  SplitMix64 rng(6);
  const auto l = random_symmetric(6, 9);
  RiccatiData r;
  r.D0 = l.matrix().topLeftCorner(3, 3);
  r.B = l.matrix().topRightCorner(3, 3);
  r.D1 = l.matrix().bottomRightCorner(3, 3);
  r.X = random_normal(3, 3, rng);
  EXPECT_GT(riccati_residual(r), 1e-3);
  EXPECT_THROW(transformed_sylvester(r), ValidationError);
  r.X = Matrix::Zero(2, 3);
  EXPECT_THROW(riccati_residual(r), DimensionError);
}

TEST(Riccati, ExactSpectralSubspaceSolvesBothEquations) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto prob = random_problem(2 + static_cast<int>(seed % 14), 0.05 + 0.4 * ((seed * 7) % 10) / 10.0, seed);
    const auto an = analyze_detailed(prob);
    ASSERT_TRUE(an.record.acute);
    const auto ang = angular_data(an.unperturbed, an.perturbed);
    ASSERT_TRUE(ang.X);
    EXPECT_LT(ang.reconstruction_residual, 1e-9);
    const RiccatiData r = riccati_data(prob.l(), ang);
    const double lnorm = operator_norm(prob.l());
    EXPECT_LT(riccati_residual(r), 1e-8 * (1 + lnorm));
    const auto ts = transformed_sylvester(r);
    EXPECT_LT(ts.residual, 1e-8 * (1 + lnorm));
    // Similarity: spectra of Lambda0/Z0 and Lambda1/Z1 coincide with omega
    // and its remainder.
    const auto ev0 = oracle::jacobi_eigenvalues(0.5 * (ts.lambda0 + ts.lambda0.transpose()));
    const auto ev_l = eigenvalues_sym(prob.l());
    std::vector<double> omega;
    for (Eigen::Index i = 0; i < ev_l.size(); ++i) {
      if (an.record.omega.contains(ev_l(i), 1e-9)) omega.push_back(ev_l(i));
    }
    ASSERT_EQ(omega.size(), ev0.size());
    for (std::size_t i = 0; i < omega.size(); ++i) EXPECT_NEAR(ev0[i], omega[i], 1e-8);
    EXPECT_LT(operator_norm(Matrix(ts.lambda0 - ts.lambda0.transpose())), 1e-8 * (1 + lnorm));
    const Matrix& x = r.X;
    EXPECT_LT(operator_norm(Matrix(x * x.transpose() * x - x * (x.transpose() * x))), 1e-12 * (1 + std::pow(operator_norm(x), 3)));
  }
}
