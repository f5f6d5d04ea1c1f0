#pragma once

// Gaussian state data model.
//
// A GaussianState rho(m, C) on n bosonic modes is fixed by its annihilation
// mean m_k = <a_k> and its 2n x 2n covariance C, defined through
//
//     Var p(x + iy) = (x, y)^T C (x, y),   p(x + iy) = sum_k x_k p_k - y_k q_k,
//
// with q = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)). In blocks,
// C11 = Cov(p), C22 = Cov(q) and C12 = -Cov(p_j, q_k). Its characteristic
// function is
//
//     Tr W(u) rho = exp(2i (x,y)^T m~ - (x,y)^T C (x,y)),   m~ = (-Im m, Re m),
//
// where W(u) = exp(a^dag(u) - a(u)).
//
// Gaussian symmetries: W(z) shifts the mean by z. For symplectic M the metaplectic
// unitary Gamma(M) satisfies Gamma(M) W(u) Gamma(M)^{-1} = W(M o u), and
// Gamma(M)^{-1} rho(m, C) Gamma(M) = rho(M^{-1} o m, M^T C M).
//
// Standard form: williamson() gives C = L^T D(s) L with D(s) = diag(nu, nu),
// nu_k = (1/2)coth(s_k/2). Then
//
//     rho = W(m) Gamma(L^{-1}) [rho(s_1) x ... x rho(s_n)] Gamma(L^{-1})^{-1} W(m)^{-1},
//
// so the disentangling unitary of rho is W(m) Gamma(L^{-1}).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gaussent/error.hpp"
#include "gaussent/extended_real.hpp"
#include "gaussent/linalg.hpp"

namespace gaussent {

/// Symplectic eigenvalues at or below 1/2 + kPureModeTol are treated as pure modes (s = inf).
inline constexpr double kPureModeTol = 1e-10;

class GaussianState {
 public:
  /// Validates mean finiteness and C + iJ/2 >= 0 (within tol). Stores the
  /// symmetrized covariance.
  GaussianState(CVector mean, Matrix cov, double tol = kDefaultTol)
      : mean_(std::move(mean)), cov_(std::move(cov)) {
    detail::require_square_even(cov_, "covariance");
    detail::require(mean_.size() == cov_.rows() / 2,
                    "mean length must equal the mode count (covariance is 2n x 2n)");
    detail::require(mean_.allFinite(), "mean has non-finite entries");
    const double min_eig = min_uncertainty_eigenvalue(cov_, tol);
    detail::require(min_eig >= -tol,
                    "covariance violates the uncertainty inequality C + iJ/2 >= 0 (min eigenvalue " +
                        std::to_string(min_eig) + ")");
    cov_ = 0.5 * (cov_ + cov_.transpose());
  }

  static GaussianState vacuum(std::size_t n) {
    detail::require(n >= 1, "vacuum: mode count must be at least 1");
    const auto k = static_cast<Eigen::Index>(n);
    return GaussianState(CVector::Zero(k), 0.5 * Matrix::Identity(2 * k, 2 * k));
  }

  static GaussianState coherent(const CVector& beta) {
    detail::require(beta.size() >= 1, "coherent: need at least one mode");
    return GaussianState(beta, 0.5 * Matrix::Identity(2 * beta.size(), 2 * beta.size()));
  }

  std::size_t modes() const { return static_cast<std::size_t>(mean_.size()); }
  const CVector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }

 private:
  struct Unchecked {};
  GaussianState(Unchecked, CVector mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
    cov_ = 0.5 * (cov_ + cov_.transpose());
  }

  friend GaussianState displace(const GaussianState&, const CVector&);
  friend GaussianState conjugate_symplectic(const GaussianState&, const Matrix&, double);

  CVector mean_;
  Matrix cov_;
};

/// Single-mode thermal state (1 - e^{-s}) e^{-s a^dag a}: mean 0, cov (1/2)coth(s/2) I.
inline GaussianState thermal_state(InverseTemperature s) {
  return GaussianState(CVector::Zero(1), s.symplectic_eigenvalue() * Matrix::Identity(2, 2));
}

/// rho(s_1) x ... x rho(s_n), covariance D(s) = diag(nu, nu).
inline GaussianState product_thermal_state(std::span<const InverseTemperature> s) {
  detail::require(!s.empty(), "product_thermal_state: need at least one mode");
  Vector nu(static_cast<Eigen::Index>(s.size()));
  for (std::size_t k = 0; k < s.size(); ++k) nu(static_cast<Eigen::Index>(k)) = s[k].symplectic_eigenvalue();
  return GaussianState(CVector::Zero(nu.size()), doubled_diagonal(nu));
}

/// m~ = (-Im m, Re m), the phase-space vector paired with (x, y) in the characteristic function.
inline Vector phase_space_mean(const CVector& m) {
  Vector out(2 * m.size());
  out << -m.imag(), m.real();
  return out;
}

/// Tr W(u) rho = exp(2i (x,y)^T m~ - (x,y)^T C (x,y)) for u = x + iy.
inline std::complex<double> characteristic_function(const GaussianState& rho, const CVector& u) {
  detail::require(static_cast<std::size_t>(u.size()) == rho.modes(),
                  "characteristic_function: argument length must equal the mode count");
  Vector w(2 * u.size());
  w << u.real(), u.imag();
  const double phase = 2.0 * w.dot(phase_space_mean(rho.mean()));
  const double quad = w.dot(rho.cov() * w);
  return std::exp(std::complex<double>(-quad, phase));
}

/// W(z) rho W(z)^dag = rho(m + z, C).
inline GaussianState displace(const GaussianState& rho, const CVector& z) {
  detail::require(static_cast<std::size_t>(z.size()) == rho.modes(),
                  "displace: displacement length must equal the mode count");
  detail::require(z.allFinite(), "displace: non-finite displacement");
  return GaussianState(GaussianState::Unchecked{}, rho.mean() + z, rho.cov());
}

/// Gamma(M)^{-1} rho Gamma(M) = rho(M^{-1} o m, M^T C M).
///
/// The symplectic check uses tol scaled by (1 + max|M|^2) so that matrices
/// produced by williamson() (residual <= 1e-8) are accepted at any squeezing.
inline GaussianState conjugate_symplectic(const GaussianState& rho, const Matrix& M,
                                          double tol = kDefaultTol) {
  detail::require(static_cast<std::size_t>(M.rows()) == 2 * rho.modes() && M.rows() == M.cols(),
                  "conjugate_symplectic: matrix must be 2n x 2n");
  const double scale = 1.0 + detail::max_abs(M) * detail::max_abs(M);
  detail::require(is_symplectic(M, std::max(tol, kWilliamsonResidualTol) * scale),
                  "conjugate_symplectic: matrix is not symplectic");
  const CVector mean = symplectic_complex_action(symplectic_inverse(M), rho.mean());
  return GaussianState(GaussianState::Unchecked{}, mean, M.transpose() * rho.cov() * M);
}

/// Symplectic spectrum nu_1 >= ... >= nu_n of the state's covariance.
inline Vector symplectic_spectrum(const GaussianState& rho, double tol = kDefaultTol) {
  return williamson(rho.cov(), tol).nu;
}

/// rho = W(ell) Gamma(L^{-1}) [x_k rho(s_k)] Gamma(L^{-1})^{-1} W(ell)^{-1}, C = L^T D(s) L.
struct StandardForm {
  CVector ell;                          // displacement, equals the mean
  Matrix L;                             // williamson() convention
  std::vector<InverseTemperature> s;    // ascending, inf for pure modes

  std::size_t modes() const { return s.size(); }

  /// L^T D(s) L.
  Matrix covariance() const {
    Vector nu(static_cast<Eigen::Index>(s.size()));
    for (std::size_t k = 0; k < s.size(); ++k) nu(static_cast<Eigen::Index>(k)) = s[k].symplectic_eigenvalue();
    return L.transpose() * doubled_diagonal(nu) * L;
  }
};

/// Thermal decomposition of a state. s is ascending; mode k of the product
/// thermal state is the k-th row pair (k, n + k) of L.
inline StandardForm standard_form(const GaussianState& rho, double pure_tol = kPureModeTol,
                                  double tol = kDefaultTol) {
  WilliamsonForm wf = williamson(rho.cov(), tol);
  StandardForm out{rho.mean(), std::move(wf.L), {}};
  out.s.reserve(rho.modes());
  // nu is descending, so s comes out ascending.
  for (Eigen::Index k = 0; k < wf.nu.size(); ++k) {
    out.s.push_back(InverseTemperature::from_symplectic_eigenvalue(wf.nu(k), pure_tol));
  }
  return out;
}

/// One-mode reduction: mean m_k and the 2x2 block of C on rows/columns (k, n + k).
struct ModeMarginal {
  std::complex<double> m;
  Eigen::Matrix2d T;
};

/// Marginal of mode k (0-based).
inline ModeMarginal mode_marginal(const GaussianState& rho, std::size_t k) {
  detail::require(k < rho.modes(), "mode_marginal: mode index out of range");
  const auto n = static_cast<Eigen::Index>(rho.modes());
  const auto i = static_cast<Eigen::Index>(k);
  const Matrix& C = rho.cov();
  Eigen::Matrix2d T;
  T << C(i, i), C(i, i + n), C(i + n, i), C(i + n, i + n);
  return {rho.mean()(i), T};
}

/// True iff |m| <= tol and max |T - I/2| <= tol.
inline bool is_vacuum_marginal(const ModeMarginal& mm, double tol = kDefaultTol) {
  const double dev = (mm.T - 0.5 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
  return std::abs(mm.m) <= tol && dev <= tol;
}

}  // namespace gaussent
