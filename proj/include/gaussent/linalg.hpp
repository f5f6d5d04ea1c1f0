#pragma once

// Dense real linear algebra for 2n x 2n symmetric and symplectic matrices.
//
// Phase-space vectors are ordered (x_1..x_n, y_1..y_n), i.e. all "x" entries
// first and all "y" entries second. The symplectic form in this ordering is
//
//     J = [[0, I], [-I, 0]].
//
// Williamson decomposition convention used throughout the library:
//
//     C = L^T diag(nu, nu) L,   L^T J L = J,   nu_1 >= ... >= nu_n >= 1/2.
//
// Algorithm: with A = C^{1/2} J C^{1/2} (real antisymmetric), the Hermitian
// matrix iA has eigenvalues +-nu_k. For each positive eigenpair iA z = nu z
// with z = a + ib, A a = nu b and A b = -nu a. The orthogonal matrix
// O = sqrt(2) [b_1..b_n, a_1..a_n] brings A to [[0, N], [-N, 0]], N = diag(nu),
// and L = diag(nu, nu)^{-1/2} O^T C^{1/2} satisfies both identities above.
// Only the two identities are contractual; L is not unique when nu repeats.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "gaussent/error.hpp"

namespace gaussent {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Module-wide default tolerance; every check takes an explicit override.
inline constexpr double kDefaultTol = 1e-9;

/// Contractual residual bound for Williamson decompositions.
inline constexpr double kWilliamsonResidualTol = 1e-8;

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // orthogonal, columns are eigenvectors
};

struct WilliamsonForm {
  Matrix L;   // symplectic, C = L^T diag(nu, nu) L
  Vector nu;  // symplectic spectrum, descending
};

namespace detail {

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline void require_square_even(const Matrix& m, const char* what) {
  require(m.rows() == m.cols(), std::string(what) + " must be square");
  require(m.rows() > 0 && m.rows() % 2 == 0, std::string(what) + " must have even dimension 2n");
}

inline void require_finite(const Matrix& m, const char* what) {
  require(m.allFinite(), std::string(what) + " has non-finite entries");
}

inline void require_symmetric(const Matrix& m, double tol, const char* what) {
  require(m.rows() == m.cols(), std::string(what) + " must be square");
  require_finite(m, what);
  const double asym = max_abs(m - m.transpose());
  require(asym <= tol * std::max(1.0, max_abs(m)),
          std::string(what) + " is not symmetric (max |A - A^T| = " + std::to_string(asym) + ")");
}

}  // namespace detail

/// The 2n x 2n block matrix [[0, I], [-I, 0]].
inline Matrix symplectic_form(std::size_t n) {
  detail::require(n >= 1, "symplectic_form: mode count must be at least 1");
  const auto k = static_cast<Eigen::Index>(n);
  Matrix J = Matrix::Zero(2 * k, 2 * k);
  J.topRightCorner(k, k).setIdentity();
  J.bottomLeftCorner(k, k) = -Matrix::Identity(k, k);
  return J;
}

/// True iff max |L^T J L - J| <= tol.
inline bool is_symplectic(const Matrix& L, double tol = kDefaultTol) {
  detail::require_square_even(L, "is_symplectic: matrix");
  detail::require_finite(L, "is_symplectic: matrix");
  const Matrix J = symplectic_form(static_cast<std::size_t>(L.rows() / 2));
  return detail::max_abs(L.transpose() * J * L - J) <= tol;
}

/// L^{-1} = -J L^T J for symplectic L.
inline Matrix symplectic_inverse(const Matrix& L) {
  detail::require_square_even(L, "symplectic_inverse: matrix");
  const Matrix J = symplectic_form(static_cast<std::size_t>(L.rows() / 2));
  return -J * L.transpose() * J;
}

/// Smallest eigenvalue of the Hermitian matrix C + (i/2) J.
inline double min_uncertainty_eigenvalue(const Matrix& C, double tol = kDefaultTol) {
  detail::require_square_even(C, "covariance");
  detail::require_symmetric(C, tol, "covariance");
  const Matrix J = symplectic_form(static_cast<std::size_t>(C.rows() / 2));
  const Matrix Cs = 0.5 * (C + C.transpose());
  const CMatrix H = Cs.cast<std::complex<double>>() + std::complex<double>(0.0, 0.5) * J;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalFailure("uncertainty check: eigensolver failed");
  return es.eigenvalues()(0);
}

/// True iff C + (i/2) J is positive semidefinite (minimum eigenvalue >= -tol).
/// Asymmetric or non-finite input is rejected.
inline bool is_valid_covariance(const Matrix& C, double tol = kDefaultTol) {
  return min_uncertainty_eigenvalue(C, tol) >= -tol;
}

/// Eigendecomposition A = Q diag(lambda) Q^T of a symmetric matrix, ascending.
inline SymmetricEigen eig_symmetric(const Matrix& A, double tol = kDefaultTol) {
  detail::require(A.rows() > 0, "eig_symmetric: empty matrix");
  detail::require_symmetric(A, tol, "eig_symmetric: matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (A + A.transpose()));
  if (es.info() != Eigen::Success) throw NumericalFailure("eig_symmetric: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Symmetric S with S S = A for symmetric positive definite A.
inline Matrix sqrt_spd(const Matrix& A, double tol = kDefaultTol) {
  const SymmetricEigen e = eig_symmetric(A, tol);
  if (!(e.values(0) > 0.0)) {
    throw InvalidArgument("sqrt_spd: matrix is not positive definite (min eigenvalue " +
                          std::to_string(e.values(0)) + ")");
  }
  const Matrix S = e.vectors * e.values.cwiseSqrt().asDiagonal() * e.vectors.transpose();
  return 0.5 * (S + S.transpose());
}

/// diag(v, v) for a length-n vector v.
inline Matrix doubled_diagonal(const Vector& v) {
  const Eigen::Index n = v.size();
  Vector d(2 * n);
  d << v, v;
  return d.asDiagonal();
}

/// Williamson normal form C = L^T diag(nu, nu) L of a valid covariance matrix.
///
/// Throws InvalidArgument when C violates the uncertainty inequality, and
/// NumericalFailure when the computed L misses either contractual residual
/// (symplectic residual <= 1e-8, reconstruction <= 1e-8 (1 + max|C|)).
inline WilliamsonForm williamson(const Matrix& C, double tol = kDefaultTol) {
  const double min_eig = min_uncertainty_eigenvalue(C, tol);
  if (min_eig < -tol) {
    throw InvalidArgument("williamson: covariance violates C + iJ/2 >= 0 (min eigenvalue " +
                          std::to_string(min_eig) + ")");
  }
  const Eigen::Index n = C.rows() / 2;
  const Matrix Cs = 0.5 * (C + C.transpose());
  const Matrix J = symplectic_form(static_cast<std::size_t>(n));

  const Matrix root = sqrt_spd(Cs, tol);
  Matrix A = root * J * root;
  A = 0.5 * (A - A.transpose());

  const CMatrix H = std::complex<double>(0.0, 1.0) * A.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
  if (es.info() != Eigen::Success) throw NumericalFailure("williamson: eigensolver failed");

  // Eigenvalues are ascending: the last n are +nu, largest last.
  Vector nu(n);
  Matrix O(2 * n, 2 * n);
  const double sqrt2 = std::sqrt(2.0);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index col = 2 * n - 1 - k;
    nu(k) = es.eigenvalues()(col);
    const CVector z = es.eigenvectors().col(col);
    O.col(k) = sqrt2 * z.imag();
    O.col(n + k) = sqrt2 * z.real();
  }
  if (!(nu(n - 1) > 0.0)) throw NumericalFailure("williamson: non-positive symplectic eigenvalue");

  const Vector inv_sqrt_nu = nu.cwiseSqrt().cwiseInverse();
  const Matrix L = doubled_diagonal(inv_sqrt_nu) * O.transpose() * root;

  const double symp_res = detail::max_abs(L.transpose() * J * L - J);
  const double recon_res = detail::max_abs(L.transpose() * doubled_diagonal(nu) * L - Cs);
  if (symp_res > kWilliamsonResidualTol ||
      recon_res > kWilliamsonResidualTol * (1.0 + detail::max_abs(Cs))) {
    throw NumericalFailure("williamson: residuals too large (symplectic " + std::to_string(symp_res) +
                           ", reconstruction " + std::to_string(recon_res) + ")");
  }
  return {L, nu};
}

/// The complex action L o u = (A11 x + A12 y) + i (A21 x + A22 y), u = x + iy,
/// where A_ij are the n x n blocks of L.
inline CVector symplectic_complex_action(const Matrix& L, const CVector& u) {
  detail::require_square_even(L, "symplectic_complex_action: matrix");
  const Eigen::Index n = L.rows() / 2;
  detail::require(u.size() == n, "symplectic_complex_action: vector length must equal mode count");
  Vector w(2 * n);
  w << u.real(), u.imag();
  const Vector v = L * w;
  CVector out(n);
  out.real() = v.head(n);
  out.imag() = v.tail(n);
  return out;
}

}  // namespace gaussent
