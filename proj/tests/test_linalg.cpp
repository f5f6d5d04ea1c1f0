#include <cmath>

#include <gtest/gtest.h>

#include "gaussent/extended_real.hpp"
#include "gaussent/linalg.hpp"
#include "test_support.hpp"

using namespace gaussent;

TEST(symplectic_form, shape_and_square) {
  const Matrix J = symplectic_form(2);
  EXPECT_EQ(J.rows(), 4);
  EXPECT_EQ(J(0, 2), 1.0);
  EXPECT_EQ(J(2, 0), -1.0);
  EXPECT_TRUE((J * J + Matrix::Identity(4, 4)).isZero());
  EXPECT_THROW(symplectic_form(0), InvalidArgument);
}

TEST(is_symplectic, generators_and_counterexamples) {
  fixtures::Rng rng(7);
  for (std::size_t n : {1, 2, 3}) EXPECT_TRUE(is_symplectic(fixtures::random_symplectic(n, rng)));
  EXPECT_FALSE(is_symplectic(2.0 * Matrix::Identity(2, 2)));
  Matrix shear = Matrix::Identity(2, 2);
  shear(0, 1) = 3.0;  // det 1 in 2D is symplectic
  EXPECT_TRUE(is_symplectic(shear));
  EXPECT_THROW(is_symplectic(Matrix::Identity(3, 3)), InvalidArgument);
}

TEST(symplectic_inverse, inverts) {
  fixtures::Rng rng(8);
  const Matrix L = fixtures::random_symplectic(3, rng);
  EXPECT_LE(detail::max_abs(symplectic_inverse(L) * L - Matrix::Identity(6, 6)), 1e-12);
}

TEST(is_valid_covariance, examples) {
  EXPECT_TRUE(is_valid_covariance(0.5 * Matrix::Identity(2, 2)));
  EXPECT_FALSE(is_valid_covariance(0.25 * Matrix::Identity(2, 2)));
  EXPECT_NEAR(min_uncertainty_eigenvalue(0.25 * Matrix::Identity(2, 2)), -0.25, 1e-14);
  EXPECT_NEAR(min_uncertainty_eigenvalue(0.5 * Matrix::Identity(2, 2)), 0.0, 1e-14);
  Matrix sq(2, 2);
  sq << 2.0, 0.0, 0.0, 0.125;  // nu = 1/2 exactly
  EXPECT_TRUE(is_valid_covariance(sq));
  sq(1, 1) = 0.12;
  EXPECT_FALSE(is_valid_covariance(sq));
  Matrix asym(2, 2);
  asym << 1.0, 0.3, 0.0, 1.0;
  EXPECT_THROW(is_valid_covariance(asym), InvalidArgument);
  Matrix nan = Matrix::Identity(2, 2);
  nan(0, 0) = std::nan("");
  EXPECT_THROW(is_valid_covariance(nan), InvalidArgument);
}

TEST(eig_symmetric, reconstructs) {
  Matrix A(3, 3);
  A << 2, 1, 0, 1, 3, 1, 0, 1, 4;
  const SymmetricEigen e = eig_symmetric(A);
  EXPECT_LE(detail::max_abs(e.vectors * e.values.asDiagonal() * e.vectors.transpose() - A), 1e-12);
  EXPECT_LE(e.values(0), e.values(1));
}

TEST(sqrt_spd, squares_back_and_rejects_indefinite) {
  Matrix A(2, 2);
  A << 4, 1, 1, 3;
  const Matrix S = sqrt_spd(A);
  EXPECT_LE(detail::max_abs(S * S - A), 1e-12);
  Matrix B(2, 2);
  B << 1, 2, 2, 1;
  EXPECT_THROW(sqrt_spd(B), InvalidArgument);
}

TEST(williamson, vacuum_and_squeezed) {
  const WilliamsonForm v = williamson(0.5 * Matrix::Identity(2, 2));
  EXPECT_NEAR(v.nu(0), 0.5, 1e-12);
  Matrix sq(2, 2);
  sq << 2.0, 0.0, 0.0, 0.5;
  const WilliamsonForm w = williamson(sq);
  EXPECT_NEAR(w.nu(0), 1.0, 1e-12);  // sqrt(2 * 1/2)
  EXPECT_TRUE(is_symplectic(w.L, 1e-10));
}

TEST(williamson, planted_spectrum_round_trip) {
  fixtures::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    Vector nu(static_cast<Eigen::Index>(n));
    for (Eigen::Index k = 0; k < nu.size(); ++k) nu(k) = fixtures::uniform(rng, 0.5, 5.0);
    const Matrix M = fixtures::random_symplectic(n, rng);
    const Matrix C = M.transpose() * doubled_diagonal(nu) * M;
    const WilliamsonForm wf = williamson(C);
    const Matrix J = symplectic_form(n);
    EXPECT_LE(detail::max_abs(wf.L.transpose() * J * wf.L - J), 1e-8);
    EXPECT_LE(detail::max_abs(wf.L.transpose() * doubled_diagonal(wf.nu) * wf.L - C), 1e-8);
    Vector sorted = nu;
    std::sort(sorted.data(), sorted.data() + sorted.size(), std::greater<>());
    EXPECT_LE((wf.nu - sorted).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(williamson, degenerate_spectrum) {
  fixtures::Rng rng(12);
  const Matrix M = fixtures::random_symplectic(3, rng);
  const Matrix C = M.transpose() * M;  // nu = (1, 1, 1)
  const WilliamsonForm wf = williamson(C);
  EXPECT_LE((wf.nu.array() - 1.0).abs().maxCoeff(), 1e-8);
  EXPECT_LE(detail::max_abs(wf.L.transpose() * doubled_diagonal(wf.nu) * wf.L - C), 1e-8);
}

TEST(williamson, rejects_invalid) {
  EXPECT_THROW(williamson(0.25 * Matrix::Identity(2, 2)), InvalidArgument);
  EXPECT_THROW(williamson(Matrix::Identity(3, 3)), InvalidArgument);
}

TEST(symplectic_complex_action, composes) {
  fixtures::Rng rng(13);
  const Matrix A = fixtures::random_symplectic(2, rng), B = fixtures::random_symplectic(2, rng);
  const CVector u = fixtures::random_mean(2, rng);
  const CVector lhs = symplectic_complex_action(A * B, u);
  const CVector rhs = symplectic_complex_action(A, symplectic_complex_action(B, u));
  EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(symplectic_complex_action, off_diagonal_block_acts_on_imaginary_part) {
  Matrix L = Matrix::Identity(2, 2);
  L(0, 1) = 2.0;  // A12
  CVector u(1);
  u << std::complex<double>(1.0, 3.0);
  EXPECT_NEAR(symplectic_complex_action(L, u)(0).real(), 7.0, 1e-15);
  EXPECT_NEAR(symplectic_complex_action(L, u)(0).imag(), 3.0, 1e-15);
}

TEST(extended_real, arithmetic_and_order) {
  EXPECT_TRUE(ExtendedReal::infinity().is_infinite());
  EXPECT_LT(ExtendedReal(1.0), ExtendedReal::infinity());
  EXPECT_THROW(ExtendedReal::infinity().value(), InvalidArgument);
  EXPECT_THROW(ExtendedReal(std::nan("")), NumericalFailure);
}

TEST(inverse_temperature, pure_threshold_and_conversions) {
  EXPECT_TRUE(InverseTemperature::from_symplectic_eigenvalue(0.5).is_infinite());
  EXPECT_TRUE(InverseTemperature::from_symplectic_eigenvalue(0.5 + 5e-11).is_infinite());
  EXPECT_FALSE(InverseTemperature::from_symplectic_eigenvalue(0.5 + 1e-9).is_infinite());
  EXPECT_NEAR(InverseTemperature::from_symplectic_eigenvalue(1.5).value(), std::log(2.0), 1e-14);
  EXPECT_NEAR(InverseTemperature(1.0).symplectic_eigenvalue(), 1.08197670686932642, 1e-14);
  EXPECT_EQ(InverseTemperature::infinity().symplectic_eigenvalue(), 0.5);
  EXPECT_EQ(InverseTemperature::infinity().success_probability(), 0.0);
  EXPECT_THROW(InverseTemperature(0.0), InvalidArgument);
  EXPECT_THROW(InverseTemperature(-1.0), InvalidArgument);
}
