#pragma once

// Entropies and divergences of Gaussian states, in nats.
//
// Both divergences work in the frame that disentangles sigma. With
// sigma = W(ell) Gamma(L^{-1}) [x_k rho(t_k)] (...)^{-1}, the pair is mapped by
// the same Gaussian unitary to
//
//     sigma' = rho(t_1) x ... x rho(t_n),
//     rho'   = rho(L o (m - ell), L^{-T} C L^{-1}),
//
// which leaves every divergence unchanged. (m_rho)_k and T_k below always refer
// to the mode marginals of rho' in this frame, and t_k, s_k are paired by index
// after sorting both ascending.

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gaussent/error.hpp"
#include "gaussent/extended_real.hpp"
#include "gaussent/gaussian_state.hpp"
#include "gaussent/linalg.hpp"

namespace gaussent {

/// H(p) = -p ln p - (1 - p) ln(1 - p), with 0 ln 0 = 0.
inline double shannon_entropy(double p) {
  detail::require(p >= 0.0 && p <= 1.0, "shannon_entropy: probability outside [0, 1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log1p(-p);
  return h;
}

/// H(p1 : p2) = p1 ln(p1/p2) + (1 - p1) ln((1 - p1)/(1 - p2)); +inf when p1 is
/// not absolutely continuous with respect to p2.
inline ExtendedReal shannon_relative_entropy(double p1, double p2) {
  detail::require(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0,
                  "shannon_relative_entropy: probability outside [0, 1]");
  double d = 0.0;
  if (p1 > 0.0) {
    if (p2 == 0.0) return ExtendedReal::infinity();
    d += p1 * std::log(p1 / p2);
  }
  if (p1 < 1.0) {
    if (p2 == 1.0) return ExtendedReal::infinity();
    d += (1.0 - p1) * (std::log1p(-p1) - std::log1p(-p2));
  }
  return ExtendedReal(d);
}

/// S(rho(s)) = H(e^{-s}) / (1 - e^{-s}); zero for the vacuum.
inline double thermal_entropy(InverseTemperature s) {
  if (s.is_infinite()) return 0.0;
  return shannon_entropy(s.success_probability()) / s.failure_probability();
}

/// von Neumann entropy: sum of thermal entropies of the standard form.
inline double von_neumann_entropy(const GaussianState& rho, double tol = kDefaultTol) {
  double total = 0.0;
  for (const InverseTemperature& s : standard_form(rho, kPureModeTol, tol).s) total += thermal_entropy(s);
  return total;
}

/// Tr rho(m, T) ln rho(t) = ln(1 - e^{-t}) - (t/2)(Tr T + 2|m|^2 - 1), finite t only.
inline double cross_term_1mode(const ModeMarginal& mm, InverseTemperature t) {
  detail::require(t.is_finite(), "cross_term_1mode: t = inf has no finite cross term");
  const double occupation = mm.T.trace() + 2.0 * std::norm(mm.m) - 1.0;
  return std::log(t.failure_probability()) - 0.5 * t.value() * occupation;
}

struct DivergenceOptions {
  double tol = kDefaultTol;          // covariance / symplectic checks
  double pure_tol = kPureModeTol;    // nu <= 1/2 + pure_tol means s = inf
  double vacuum_tol = kDefaultTol;   // is_vacuum_marginal threshold on the infinity branch
};

/// Pair (rho', t) in the frame where sigma is a product of thermal states.
struct ReferenceFrame {
  std::vector<InverseTemperature> t;  // sigma's spectrum, ascending
  GaussianState rho;                  // rho' = (W(ell) Gamma(L^{-1}))^{-1} rho (...)
};

inline ReferenceFrame reference_frame(const GaussianState& rho, const GaussianState& sigma,
                                      const DivergenceOptions& opt = {}) {
  detail::require(rho.modes() == sigma.modes(), "divergence: states have different mode counts");
  StandardForm sf = standard_form(sigma, opt.pure_tol, opt.tol);
  GaussianState moved = conjugate_symplectic(displace(rho, -sf.ell), symplectic_inverse(sf.L), opt.tol);
  return {std::move(sf.s), std::move(moved)};
}

struct ModeTerms {
  double classical = 0.0;
  double quantum = 0.0;
};

struct DivergenceResult {
  ExtendedReal value;
  double classical_part = 0.0;
  double quantum_part = 0.0;
  std::vector<ModeTerms> per_mode;      // empty when value is infinite
  std::optional<std::size_t> infinite_mode;  // first mode that forced value = inf
};

/// Relative entropy S(rho || sigma) = Tr rho (ln rho - ln sigma) with its
/// classical/quantum split. Per mode k (finite t_k):
///
///     classical_k = H(e^{-s_k} : e^{-t_k}) / (1 - e^{-s_k}),
///     quantum_k   = (t_k / 2) [Tr T_k - coth(s_k / 2) + 2 |(m_rho)_k|^2].
///
/// A mode with t_k = inf makes the value +inf unless its marginal in rho' is the
/// vacuum; such a vacuum mode contributes classical_k = -S(rho(s_k)), quantum_k = 0.
inline DivergenceResult relative_entropy(const GaussianState& rho, const GaussianState& sigma,
                                         const DivergenceOptions& opt = {}) {
  const ReferenceFrame frame = reference_frame(rho, sigma, opt);
  const std::size_t n = rho.modes();

  DivergenceResult out;
  for (std::size_t k = 0; k < n; ++k) {
    if (frame.t[k].is_infinite() && !is_vacuum_marginal(mode_marginal(frame.rho, k), opt.vacuum_tol)) {
      out.value = ExtendedReal::infinity();
      out.infinite_mode = k;
      return out;
    }
  }

  const StandardForm own = standard_form(frame.rho, opt.pure_tol, opt.tol);
  out.per_mode.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const InverseTemperature s = own.s[k];
    const InverseTemperature t = frame.t[k];
    ModeTerms& terms = out.per_mode[k];
    if (t.is_infinite()) {
      terms.classical = -thermal_entropy(s);
    } else {
      const ModeMarginal mm = mode_marginal(frame.rho, k);
      const ExtendedReal h = shannon_relative_entropy(s.success_probability(), t.success_probability());
      terms.classical = h.value() / s.failure_probability();
      terms.quantum = 0.5 * t.value() *
                      (mm.T.trace() - 2.0 * s.symplectic_eigenvalue() + 2.0 * std::norm(mm.m));
    }
    out.classical_part += terms.classical;
    out.quantum_part += terms.quantum;
  }
  out.value = ExtendedReal(out.classical_part + out.quantum_part);
  return out;
}

/// Relative entropy in the ungrouped form
///
///     -S(rho) - sum_{k: t_k < inf} Tr rho((m_rho)_k, T_k) ln rho(t_k),
///
/// with the same infinity rule as relative_entropy(). Independent of the
/// per-mode classical/quantum regrouping.
inline ExtendedReal relative_entropy_ungrouped(const GaussianState& rho, const GaussianState& sigma,
                                               const DivergenceOptions& opt = {}) {
  const ReferenceFrame frame = reference_frame(rho, sigma, opt);
  double total = -von_neumann_entropy(rho, opt.tol);
  for (std::size_t k = 0; k < rho.modes(); ++k) {
    const ModeMarginal mm = mode_marginal(frame.rho, k);
    if (frame.t[k].is_infinite()) {
      if (!is_vacuum_marginal(mm, opt.vacuum_tol)) return ExtendedReal::infinity();
      continue;
    }
    total -= cross_term_1mode(mm, frame.t[k]);
  }
  return ExtendedReal(total);
}

struct PetzRenyiTerms {
  double r1 = 0.0;  // thermal normalization of rho^alpha
  double r2 = 0.0;  // thermal normalization of sigma^{1-alpha}
  double r3 = 0.0;  // displacement (quadratic form in m~)
  double r4 = 0.0;  // log-determinant of the combined covariance

  double sum() const { return r1 + r2 + r3 + r4; }
};

struct PetzRenyiResult {
  double alpha = 0.0;
  ExtendedReal value;
  PetzRenyiTerms terms;
};

namespace detail {

inline void require_alpha(double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "Petz-Renyi order alpha must lie in (0, 1)");
}

/// Everything the Petz-Renyi closed form needs, in sigma's thermal frame.
struct PetzRenyiFrame {
  std::vector<InverseTemperature> s;  // rho's spectrum (from rho'), ascending
  std::vector<InverseTemperature> t;  // sigma's spectrum, ascending
  Vector m_tilde;                     // (-Im m_rho, Re m_rho)
  Matrix combined;                    // L_rho^T D(alpha s) L_rho + D((1 - alpha) t)
};

inline Vector half_coth_diagonal(const std::vector<InverseTemperature>& r, double scale) {
  Vector nu(static_cast<Eigen::Index>(r.size()));
  for (std::size_t k = 0; k < r.size(); ++k) {
    nu(static_cast<Eigen::Index>(k)) = r[k].scaled(scale).symplectic_eigenvalue();
  }
  return nu;
}

inline PetzRenyiFrame petz_renyi_frame(const GaussianState& rho, const GaussianState& sigma, double alpha,
                                       const DivergenceOptions& opt) {
  require_alpha(alpha);
  ReferenceFrame frame = reference_frame(rho, sigma, opt);
  const WilliamsonForm wf = williamson(frame.rho.cov(), opt.tol);

  PetzRenyiFrame out;
  out.t = std::move(frame.t);
  out.s.reserve(rho.modes());
  for (Eigen::Index k = 0; k < wf.nu.size(); ++k) {
    out.s.push_back(InverseTemperature::from_symplectic_eigenvalue(wf.nu(k), opt.pure_tol));
  }
  out.m_tilde = phase_space_mean(frame.rho.mean());
  out.combined = wf.L.transpose() * doubled_diagonal(half_coth_diagonal(out.s, alpha)) * wf.L +
                 doubled_diagonal(half_coth_diagonal(out.t, 1.0 - alpha));
  out.combined = 0.5 * (out.combined + out.combined.transpose());
  return out;
}

/// ln(1 - e^{-c r}) for c > 0; zero at r = inf.
inline double log_failure(InverseTemperature r, double c) {
  return std::log(r.scaled(c).failure_probability());
}

}  // namespace detail

/// Petz-Renyi relative entropy S_alpha = ln Tr(rho^alpha sigma^{1-alpha}) / (alpha - 1),
/// 0 < alpha < 1, as the sum of four closed-form terms:
///
///     R1 = -1/(1-a) sum_k [a ln(1 - e^{-s_k}) - ln(1 - e^{-a s_k})]
///     R2 = sum_k [-ln(1 - e^{-t_k}) + 1/(1-a) ln(1 - e^{-(1-a) t_k})]
///     R3 = 1/(1-a) m~^T A^{-1} m~
///     R4 = 1/(2(1-a)) ln det A,   A = L_rho^T D(a s) L_rho + D((1-a) t)
///
/// Pure modes (s_k or t_k = inf) use the limiting entries 1/2 in D and 0 for
/// the logarithms. A is solved by Cholesky; failure is reported, never regularized.
inline PetzRenyiResult petz_renyi(const GaussianState& rho, const GaussianState& sigma, double alpha,
                                  const DivergenceOptions& opt = {}) {
  const detail::PetzRenyiFrame f = detail::petz_renyi_frame(rho, sigma, alpha, opt);
  const double beta = 1.0 - alpha;

  PetzRenyiTerms terms;
  for (std::size_t k = 0; k < f.s.size(); ++k) {
    terms.r1 -= (alpha * detail::log_failure(f.s[k], 1.0) - detail::log_failure(f.s[k], alpha)) / beta;
    terms.r2 += -detail::log_failure(f.t[k], 1.0) + detail::log_failure(f.t[k], beta) / beta;
  }

  const Eigen::LLT<Matrix> llt(f.combined);
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure("petz_renyi: combined covariance is not numerically positive definite");
  }
  const Vector solved = llt.solve(f.m_tilde);
  const Vector diag = llt.matrixL().toDenseMatrix().diagonal();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) log_det += 2.0 * std::log(diag(i));
  if (!solved.allFinite() || !std::isfinite(log_det)) {
    throw NumericalFailure("petz_renyi: non-finite solve of the combined covariance");
  }
  terms.r3 = f.m_tilde.dot(solved) / beta;
  terms.r4 = log_det / (2.0 * beta);

  return {alpha, ExtendedReal(terms.sum()), terms};
}

/// Tr rho^alpha sigma^{1-alpha} from the Gaussian overlap integral:
///
///     p^a(s)/p(a s) * p^{1-a}(t)/p((1-a) t) * exp(-m~^T A^{-1} m~) / sqrt(det A),
///
/// p(r) = prod_k (1 - e^{-r_k}). Uses an LU factorization, independent of the
/// Cholesky path in petz_renyi().
inline double trace_power_overlap(const GaussianState& rho, const GaussianState& sigma, double alpha,
                                  const DivergenceOptions& opt = {}) {
  const detail::PetzRenyiFrame f = detail::petz_renyi_frame(rho, sigma, alpha, opt);
  const double beta = 1.0 - alpha;

  double prefactor = 1.0;
  for (std::size_t k = 0; k < f.s.size(); ++k) {
    prefactor *= std::pow(f.s[k].failure_probability(), alpha) / f.s[k].scaled(alpha).failure_probability();
    prefactor *= std::pow(f.t[k].failure_probability(), beta) / f.t[k].scaled(beta).failure_probability();
  }
  const Eigen::PartialPivLU<Matrix> lu(f.combined);
  const double det = lu.determinant();
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw NumericalFailure("trace_power_overlap: combined covariance has non-positive determinant");
  }
  const double quad = f.m_tilde.dot(lu.solve(f.m_tilde));
  const double overlap = prefactor * std::exp(-quad) / std::sqrt(det);
  if (!std::isfinite(overlap)) throw NumericalFailure("trace_power_overlap: non-finite overlap");
  return overlap;
}

}  // namespace gaussent
