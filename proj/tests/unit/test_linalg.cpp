#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "raidkit/error.hpp"
#include "raidkit/kernels.hpp"
#include "raidkit/linalg.hpp"
#include "test_support.hpp"

using raidkit::DenseMatrix;
namespace rt = raidkit::testing;

namespace {

DenseMatrix orthonormality_defect(const DenseMatrix& q) {
  DenseMatrix g = raidkit::matmul_tn(q, q);
  g -= DenseMatrix::identity(q.cols());
  return g;
}

}  // namespace

TEST(Matmul, MatchesTripleLoop) {
  std::mt19937_64 rng(11);
  for (auto [m, k, n] : {std::tuple{1, 1, 1}, {5, 3, 7}, {64, 33, 17}, {130, 70, 90}}) {
    const DenseMatrix a = rt::gaussian(m, k, rng);
    const DenseMatrix b = rt::gaussian(k, n, rng);
    const DenseMatrix ref = rt::naive_matmul(a, b);
    const double tol = 1e-14 * k;
    EXPECT_LT(rt::max_abs_diff(raidkit::matmul(a, b), ref), tol);
    EXPECT_LT(rt::max_abs_diff(raidkit::matmul_tn(a.transpose(), b), ref), tol);
    EXPECT_LT(rt::max_abs_diff(raidkit::matmul_nt(a, b.transpose()), ref), tol);
  }
}

TEST(Matmul, EmptyInnerDimensionGivesZeros) {
  const DenseMatrix c = raidkit::matmul(DenseMatrix(3, 0), DenseMatrix(0, 2));
  EXPECT_EQ(c, DenseMatrix(3, 2));
  EXPECT_THROW(raidkit::matmul(DenseMatrix(3, 2), DenseMatrix(3, 2)), raidkit::ContractViolation);
}

TEST(PivotedQr, ReconstructsAndIsOrthonormal) {
  std::mt19937_64 rng(12);
  for (auto [m, n] : {std::pair{40, 25}, {25, 40}, {60, 60}, {1, 5}, {5, 1}}) {
    const DenseMatrix a = rt::gaussian(m, n, rng);
    const auto f = raidkit::pivoted_qr(a);
    ASSERT_EQ(f.rank, std::min<std::size_t>(m, n));
    const DenseMatrix qr = raidkit::matmul(f.q, f.r_factor);
    const DenseMatrix ap = a.columns(f.perm);
    EXPECT_LT(rt::max_abs_diff(qr, ap), 1e-13 * a.frobenius_norm());
    EXPECT_LT(orthonormality_defect(f.q).max_abs(), 1e-14 * m);
    for (std::size_t i = 1; i < f.rank; ++i) {
      EXPECT_LE(std::abs(f.r_factor(i, i)), std::abs(f.r_factor(i - 1, i - 1)) * (1 + 1e-12));
    }
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = j + 1; i < f.rank; ++i) EXPECT_EQ(f.r_factor(i, j), 0.0);
  }
}

TEST(PivotedQr, TiesBreakTowardLowestIndex) {
  const auto f = raidkit::pivoted_qr(DenseMatrix::identity(4));
  EXPECT_EQ(f.perm, (std::vector<std::size_t>{0, 1, 2, 3}));
  const DenseMatrix m{{1, 3, 3}, {0, 4, 4}};
  EXPECT_EQ(raidkit::pivoted_qr(m).perm.front(), 1u);
}

TEST(PivotedQr, DetectsRankAndRejectsZero) {
  std::mt19937_64 rng(13);
  const DenseMatrix a = raidkit::matmul(rt::gaussian(50, 6, rng), rt::gaussian(6, 30, rng));
  EXPECT_EQ(raidkit::pivoted_qr(a).rank, 6u);
  EXPECT_THROW(raidkit::pivoted_qr(DenseMatrix(4, 3)), raidkit::ContractViolation);
}

TEST(Svd, MatchesEigenSingularValues) {
  std::mt19937_64 rng(14);
  for (auto [m, n] : {std::pair{30, 20}, {20, 30}, {50, 50}, {1, 7}, {7, 1}, {120, 80}}) {
    const DenseMatrix a = rt::gaussian(m, n, rng);
    const auto f = raidkit::svd(a);
    const auto ref = rt::eigen_singular_values(a);
    ASSERT_EQ(f.sigma.size(), static_cast<std::size_t>(ref.size()));
    for (std::size_t i = 0; i < f.sigma.size(); ++i) EXPECT_NEAR(f.sigma[i], ref(i), 1e-13 * ref(0));
    DenseMatrix us = f.u;
    for (std::size_t j = 0; j < us.cols(); ++j) raidkit::kernels::scal(f.sigma[j], us.col(j));
    EXPECT_LT(rt::max_abs_diff(raidkit::matmul_nt(us, f.v), a), 1e-13 * ref(0) * std::max(m, n));
    EXPECT_LT(orthonormality_defect(f.u).max_abs(), 1e-13);
    EXPECT_LT(orthonormality_defect(f.v).max_abs(), 1e-13);
  }
}

TEST(Svd, RankDeficientKeepsOrthonormalFactors) {
  std::mt19937_64 rng(15);
  const DenseMatrix a = raidkit::matmul(rt::gaussian(40, 3, rng), rt::gaussian(3, 12, rng));
  const auto f = raidkit::svd(a);
  EXPECT_LT(f.sigma[3], 1e-13 * f.sigma[0]);
  EXPECT_LT(orthonormality_defect(f.u).max_abs(), 1e-12);
  EXPECT_LT(orthonormality_defect(f.v).max_abs(), 1e-12);
  const auto z = raidkit::svd(DenseMatrix(4, 3));
  EXPECT_EQ(z.sigma, (std::vector<double>{0, 0, 0}));
  EXPECT_LT(orthonormality_defect(z.u).max_abs(), 1e-15);
}

TEST(Svd, GradedSpectrumRelativeAccuracy) {
  std::mt19937_64 rng(16);
  std::vector<double> sigma;
  for (int i = 0; i < 20; ++i) sigma.push_back(std::pow(10.0, -0.5 * i));
  const DenseMatrix a = rt::with_spectrum(40, 20, sigma, rng);
  const auto s = raidkit::singular_values(a);
  for (int i = 0; i < 20; ++i) EXPECT_NEAR(s[i], sigma[i], 1e-14 * 40);
}

TEST(Pseudoinverse, MoorePenroseConditions) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 5 + trial * 3, n = 3 + trial * 2, r = 2 + trial % 5;
    const DenseMatrix a = raidkit::matmul(rt::gaussian(m, r, rng), rt::gaussian(r, n, rng));
    const DenseMatrix x = raidkit::pseudoinverse(a);
    const double scale = a.max_abs() * x.max_abs() * static_cast<double>(m + n);
    const DenseMatrix ax = raidkit::matmul(a, x);
    const DenseMatrix xa = raidkit::matmul(x, a);
    EXPECT_LT(rt::max_abs_diff(raidkit::matmul(ax, a), a), 1e-12 * scale * a.max_abs());
    EXPECT_LT(rt::max_abs_diff(raidkit::matmul(xa, x), x), 1e-12 * scale * x.max_abs());
    EXPECT_LT(rt::max_abs_diff(ax, ax.transpose()), 1e-12 * scale);
    EXPECT_LT(rt::max_abs_diff(xa, xa.transpose()), 1e-12 * scale);
  }
  EXPECT_EQ(raidkit::pseudoinverse(DenseMatrix(3, 2)), DenseMatrix(2, 3));
}

TEST(LeastSquares, FullRankMatchesNormalEquations) {
  std::mt19937_64 rng(18);
  const DenseMatrix a = rt::gaussian(60, 8, rng);
  const DenseMatrix b = rt::gaussian(60, 3, rng);
  const DenseMatrix x = raidkit::least_squares_solve(a, b);
  const rt::EMatrix ea = rt::to_eigen(a);
  const rt::EMatrix ref = (ea.transpose() * ea).ldlt().solve(ea.transpose() * rt::to_eigen(b));
  EXPECT_LT(rt::max_abs_diff(x, rt::from_eigen(ref)), 1e-12);
}

TEST(LeastSquares, RankDeficientGivesMinimumNorm) {
  std::mt19937_64 rng(19);
  const DenseMatrix a = raidkit::matmul(rt::gaussian(30, 4, rng), rt::gaussian(4, 10, rng));
  const DenseMatrix b = rt::gaussian(30, 2, rng);
  const DenseMatrix x = raidkit::least_squares_solve(a, b);
  const rt::EMatrix ref = rt::to_eigen(a).completeOrthogonalDecomposition().solve(rt::to_eigen(b));
  EXPECT_LT(rt::max_abs_diff(x, rt::from_eigen(ref)), 1e-10 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
  EXPECT_THROW(raidkit::least_squares_solve(a, rt::gaussian(29, 2, rng)), raidkit::ContractViolation);
}

TEST(SpectralNorm, PowerIterationAgreesWithSvd) {
  std::mt19937_64 rng(20);
  for (auto [m, n] : {std::pair{300, 280}, {500, 260}, {270, 600}}) {
    const DenseMatrix a = rt::gaussian(m, n, rng);
    const double exact = rt::eigen_norm2(a);
    EXPECT_NEAR(raidkit::spectral_norm_power(a, 1e-10), exact, 1e-7 * exact);
    EXPECT_NEAR(raidkit::spectral_norm(a), exact, 1e-6 * exact);
  }
  EXPECT_EQ(raidkit::spectral_norm(DenseMatrix(5, 5)), 0.0);
  const DenseMatrix d = DenseMatrix::diagonal(std::vector<double>{3.0, 1.0});
  EXPECT_DOUBLE_EQ(raidkit::spectral_norm(d), 3.0);
}

TEST(SpectralNorm, IterationCapReportsEstimate) {
  std::mt19937_64 rng(21);
  std::vector<double> sigma(300);
  for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = 1.0 - 1e-3 * static_cast<double>(i);
  const DenseMatrix a = rt::with_spectrum(300, 300, sigma, rng);
  try {
    raidkit::spectral_norm_power(a, 1e-15, 3);
    FAIL() << "expected NumericalError";
  } catch (const raidkit::NumericalError& e) {
    EXPECT_GT(e.best_estimate(), 0.9);
    EXPECT_GE(e.residual(), 0.0);
  }
}

TEST(SpectralNorm, FrobeniusAndSeminorm) {
  const DenseMatrix a{{1, 2}, {3, 4}};
  EXPECT_DOUBLE_EQ(raidkit::matrix_norm(a, raidkit::NormKind::frobenius), std::sqrt(30.0));
  const DenseMatrix d = DenseMatrix::identity(2);
  EXPECT_DOUBLE_EQ(raidkit::seminorm_A(a, d, raidkit::NormKind::frobenius), std::sqrt(30.0));
}

TEST(Whitening, IsAPartialIsometryOntoRangeOfA) {
  std::mt19937_64 rng(22);
  const DenseMatrix a = raidkit::matmul(rt::gaussian(40, 5, rng), rt::gaussian(5, 8, rng));
  const auto w = raidkit::whitening_operator(a);
  EXPECT_EQ(w.rank(), 5u);
  const DenseMatrix s = w.materialize();
  ASSERT_EQ(s.rows(), 8u);
  ASSERT_EQ(s.cols(), 40u);
  // S^T S = A A^+
  const DenseMatrix sts = raidkit::matmul_tn(s, s);
  const DenseMatrix proj = raidkit::matmul(a, raidkit::pseudoinverse(a));
  EXPECT_LT(rt::max_abs_diff(sts, proj), 1e-12);
  const auto sv = rt::eigen_singular_values(s);
  for (int i = 0; i < sv.size(); ++i) EXPECT_NEAR(sv(i), i < 5 ? 1.0 : 0.0, 1e-12);
  // S = (A^T A)^{-1/2} A^T on range(A)
  const DenseMatrix b = rt::gaussian(40, 3, rng);
  EXPECT_LT(rt::max_abs_diff(w.apply(b), raidkit::matmul(s, b)), 1e-12);
  EXPECT_LT(rt::max_abs_diff(w.apply_adjoint(w.apply(b)), raidkit::matmul(proj, b)), 1e-12);
  EXPECT_LT(rt::max_abs_diff(w.inverse_sqrt_gram(raidkit::matmul_tn(a, b)), w.apply(b)), 1e-10);
}

TEST(Whitening, ZeroDesignAndMaterializeLimit) {
  try {
    raidkit::whitening_operator(DenseMatrix(5, 3));
    FAIL();
  } catch (const raidkit::ContractViolation& e) {
    EXPECT_STREQ(e.what(), "whitening undefined for zero design matrix");
  }
  std::mt19937_64 rng(23);
  const auto w = raidkit::whitening_operator(rt::gaussian(3000, 2, rng));
  EXPECT_THROW(w.materialize(), raidkit::ContractViolation);
}
