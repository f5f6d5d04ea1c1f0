#pragma once

// Brute-force truncated Fock-space oracle for 1- and 2-mode Gaussian states.
//
// States are built from a recipe: a product of thermal states followed by a
// sequence of Gaussian unitaries U = exp(G) from a small generator set
//
//     displacement   G = beta a^dag - conj(beta) a
//     squeeze        G = (r/2)(e^{-2i phi} a^2 - e^{2i phi} a^dag^2)
//     rotation       G = -i theta a^dag a
//     beamsplitter   G = theta (a_0^dag a_1 - a_0 a_1^dag)
//
// Each recipe has two views. to_fock() exponentiates the truncated generators:
// one-mode generators as a d x d exponential applied to one tensor factor, the
// beamsplitter blockwise over total photon number (it conserves n_0 + n_1 also
// after truncation). to_gaussian() pushes (mean, covariance) through the exact Heisenberg
// action U^dag a U = A a + B a^dag + c of each generator, which does not use any
// of the metaplectic machinery in gaussian_state.hpp.
//
// Recipe densities keep their spectral decomposition rho = V diag(w) V^dag with
// exact thermal weights w. Divergences are evaluated in those eigenbases, so
// eigenvalues far below double precision resolution (a cold sigma at large
// photon number) still enter ln sigma and sigma^{1-alpha} correctly. Weights are
// not renormalized; tail_mass reports the truncated probability.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gaussent/entropy.hpp"
#include "gaussent/error.hpp"
#include "gaussent/extended_real.hpp"
#include "gaussent/gaussian_state.hpp"
#include "gaussent/linalg.hpp"

namespace gaussent::oracle {

using Complex = std::complex<double>;

/// Dense operator on the truncated Fock space of 1 or 2 modes. Basis index of
/// |n_0, n_1> is n_0 * dim + n_1.
struct FockOperator {
  std::size_t dim = 0;    // per-mode truncation d
  std::size_t modes = 0;  // 1 or 2
  CMatrix matrix;
};

/// Density with a known spectral decomposition vectors diag(weights) vectors^dag.
struct FockDensity {
  std::size_t dim = 0;
  std::size_t modes = 0;
  CMatrix vectors;         // orthonormal columns
  Vector weights;          // eigenvalues, not renormalized
  double tail_mass = 0.0;  // 1 - sum(weights)

  FockOperator density() const {
    return {dim, modes, vectors * weights.cast<std::complex<double>>().asDiagonal() * vectors.adjoint()};
  }
};

struct Displacement {
  std::size_t mode = 0;
  Complex beta;
};
struct Squeeze {
  std::size_t mode = 0;
  double r = 0.0;
  double phi = 0.0;
};
struct Rotation {
  std::size_t mode = 0;
  double theta = 0.0;
};
/// Couples modes 0 and 1.
struct Beamsplitter {
  double theta = 0.0;
};
using Generator = std::variant<Displacement, Squeeze, Rotation, Beamsplitter>;

struct OracleOptions {
  double eig_floor = 1e-12;  // dense path: eigenvalues at or below are treated as zero
  double mass_tol = 1e-8;    // rho-mass outside sigma's support that forces +inf
  double psd_tol = 1e-10;    // dense path: most negative eigenvalue accepted
};

namespace detail {

using gaussent::detail::require;

inline std::size_t total_dim(std::size_t d, std::size_t modes) { return modes == 1 ? d : d * d; }

inline void require_layout(std::size_t d, std::size_t modes) {
  require(d >= 2, "oracle: truncation dimension must be at least 2");
  require(modes == 1 || modes == 2, "oracle: only 1- and 2-mode systems are supported");
}

inline std::size_t generator_mode(const Generator& g) {
  return std::visit(
      [](const auto& x) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Beamsplitter>) {
          return 1;
        } else {
          return x.mode;
        }
      },
      g);
}

/// U = exp(G) for anti-Hermitian G, via the Hermitian eigendecomposition of iG.
inline CMatrix exp_anti_hermitian(const CMatrix& G) {
  const CMatrix H = Complex(0.0, 1.0) * G;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (H + H.adjoint()));
  if (es.info() != Eigen::Success) throw NumericalFailure("oracle: eigensolver failed in exp");
  CVector phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::exp(Complex(0.0, -es.eigenvalues()(i)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Exact Heisenberg action U^dag a U = A a + B a^dag + c of one generator.
struct Bogoliubov {
  CMatrix A;
  CMatrix B;
  CVector c;
};

inline Bogoliubov heisenberg_action(const Generator& g, std::size_t modes) {
  const auto n = static_cast<Eigen::Index>(modes);
  Bogoliubov h{CMatrix::Identity(n, n), CMatrix::Zero(n, n), CVector::Zero(n)};
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Displacement>) {
          h.c(static_cast<Eigen::Index>(x.mode)) = x.beta;
        } else if constexpr (std::is_same_v<T, Squeeze>) {
          const auto j = static_cast<Eigen::Index>(x.mode);
          h.A(j, j) = std::cosh(x.r);
          h.B(j, j) = -std::exp(Complex(0.0, 2.0 * x.phi)) * std::sinh(x.r);
        } else if constexpr (std::is_same_v<T, Rotation>) {
          const auto j = static_cast<Eigen::Index>(x.mode);
          h.A(j, j) = std::exp(Complex(0.0, -x.theta));
        } else {
          const double c = std::cos(x.theta), s = std::sin(x.theta);
          h.A << c, s, -s, c;
        }
      },
      g);
  return h;
}

/// Real map on the phase-space vector (p_1..p_n, -q_1..-q_n) induced by (A, B).
inline Matrix phase_space_map(const CMatrix& A, const CMatrix& B) {
  const Eigen::Index n = A.rows();
  Matrix S(2 * n, 2 * n);
  S.topLeftCorner(n, n) = A.real() - B.real();
  S.topRightCorner(n, n) = -(A.imag() + B.imag());
  S.bottomLeftCorner(n, n) = A.imag() - B.imag();
  S.bottomRightCorner(n, n) = A.real() + B.real();
  return S;
}

}  // namespace detail

/// Lowering operator on span{|0>, ..., |d-1>}: <k-1| a |k> = sqrt(k).
inline FockOperator annihilation_matrix(std::size_t d) {
  detail::require(d >= 2, "annihilation_matrix: truncation dimension must be at least 2");
  const auto n = static_cast<Eigen::Index>(d);
  CMatrix a = CMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return {d, 1, a};
}

/// a_k acting on the full 1- or 2-mode truncated space.
inline CMatrix mode_annihilation(std::size_t d, std::size_t modes, std::size_t k) {
  detail::require_layout(d, modes);
  detail::require(k < modes, "mode_annihilation: mode index out of range");
  const CMatrix a = annihilation_matrix(d).matrix;
  if (modes == 1) return a;
  const auto n = static_cast<Eigen::Index>(d);
  CMatrix out = CMatrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index l = 1; l < n; ++l) {
        // k == 0: a (x) I maps |l, j> -> sqrt(l)|l-1, j>; k == 1: I (x) a.
        if (k == 0 && i == l) out((l - 1) * n + j, l * n + j) = a(l - 1, l);
        if (k == 1 && j == l) out(i * n + (l - 1), i * n + l) = a(l - 1, l);
      }
    }
  }
  return out;
}

/// Thermal weights (1 - e^{-s}) e^{-s k}, k < d, not renormalized. s = inf gives |0><0|.
inline Vector thermal_weights(InverseTemperature s, std::size_t d) {
  detail::require(d >= 2, "thermal_weights: truncation dimension must be at least 2");
  Vector w = Vector::Zero(static_cast<Eigen::Index>(d));
  if (s.is_infinite()) {
    w(0) = 1.0;
    return w;
  }
  const double norm = s.failure_probability();
  for (Eigen::Index k = 0; k < w.size(); ++k) w(k) = norm * std::exp(-s.value() * static_cast<double>(k));
  return w;
}

/// Product of thermal densities on 1 or 2 modes (diagonal in the number basis).
inline FockDensity thermal_density(std::span<const InverseTemperature> s, std::size_t d) {
  detail::require_layout(d, s.size());
  Vector w = thermal_weights(s[0], d);
  if (s.size() == 2) {
    const Vector w1 = thermal_weights(s[1], d);
    Vector prod(w.size() * w1.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) prod.segment(i * w1.size(), w1.size()) = w(i) * w1;
    w = prod;
  }
  // Zero-weight basis states (pure modes) are dropped.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w(i) > 0.0) keep.push_back(i);
  FockDensity out{d, s.size(), CMatrix::Zero(w.size(), static_cast<Eigen::Index>(keep.size())),
                  Vector(static_cast<Eigen::Index>(keep.size())), 1.0 - w.sum()};
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    out.vectors(keep[c], col) = 1.0;
    out.weights(col) = w(keep[c]);
  }
  return out;
}

inline FockDensity thermal_density(InverseTemperature s, std::size_t d) {
  const InverseTemperature one[] = {s};
  return thermal_density(std::span<const InverseTemperature>(one), d);
}

/// Anti-Hermitian generator matrix G of g on the truncated space.
inline CMatrix generator_matrix(const Generator& g, std::size_t d, std::size_t modes) {
  detail::require_layout(d, modes);
  detail::require(detail::generator_mode(g) < modes, "generator acts on a mode outside the system");
  return std::visit(
      [&](const auto& x) -> CMatrix {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Beamsplitter>) {
          const CMatrix a0 = mode_annihilation(d, modes, 0);
          const CMatrix a1 = mode_annihilation(d, modes, 1);
          return x.theta * (a0.adjoint() * a1 - a0 * a1.adjoint());
        } else {
          const CMatrix a = mode_annihilation(d, modes, x.mode);
          if constexpr (std::is_same_v<T, Displacement>) {
            return x.beta * a.adjoint() - std::conj(x.beta) * a;
          } else if constexpr (std::is_same_v<T, Squeeze>) {
            const Complex e = std::exp(Complex(0.0, -2.0 * x.phi));
            return 0.5 * x.r * (e * a * a - std::conj(e) * a.adjoint() * a.adjoint());
          } else {
            return Complex(0.0, -x.theta) * a.adjoint() * a;
          }
        }
      },
      g);
}

namespace detail {

/// Applies the one-mode unitary U1 on mode k to every column of V (in place).
/// Column-major reshape of a column gives M(n_1, n_0), so mode 0 acts from the
/// right as M U1^T and mode 1 from the left as U1 M.
inline void apply_mode_unitary(CMatrix& V, const CMatrix& U1, std::size_t k, std::size_t d, std::size_t modes) {
  if (modes == 1) {
    V = U1 * V;
    return;
  }
  const auto n = static_cast<Eigen::Index>(d);
  for (Eigen::Index c = 0; c < V.cols(); ++c) {
    Eigen::Map<CMatrix> M(V.col(c).data(), n, n);
    if (k == 0) {
      M = (M * U1.transpose()).eval();
    } else {
      M = (U1 * M).eval();
    }
  }
}

/// Beamsplitter exp(theta (a_0^dag a_1 - a_0 a_1^dag)) applied blockwise over N = n_0 + n_1.
inline void apply_beamsplitter(CMatrix& V, double theta, std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  for (Eigen::Index N = 0; N <= 2 * (n - 1); ++N) {
    std::vector<Eigen::Index> idx;  // basis indices with n_0 + n_1 = N, ordered by n_0
    const Eigen::Index lo = std::max<Eigen::Index>(0, N - (n - 1)), hi = std::min(N, n - 1);
    for (Eigen::Index i = lo; i <= hi; ++i) idx.push_back(i * n + (N - i));
    const auto b = static_cast<Eigen::Index>(idx.size());
    if (b == 1 && (N == 0 || N == 2 * (n - 1))) {
      // |0,0> is invariant; |d-1,d-1> has no in-space neighbours either.
      continue;
    }
    CMatrix G = CMatrix::Zero(b, b);
    for (Eigen::Index p = 0; p < b; ++p) {
      const double i = static_cast<double>(lo + p), j = static_cast<double>(N - lo - p);
      // a_0^dag a_1 |i,j> = sqrt(i+1) sqrt(j) |i+1,j-1>
      if (p + 1 < b) G(p + 1, p) += theta * std::sqrt(i + 1.0) * std::sqrt(j);
      // a_0 a_1^dag |i,j> = sqrt(i) sqrt(j+1) |i-1,j+1>
      if (p >= 1) G(p - 1, p) -= theta * std::sqrt(i) * std::sqrt(j + 1.0);
    }
    const CMatrix U = exp_anti_hermitian(G);
    CMatrix rows(b, V.cols());
    for (Eigen::Index p = 0; p < b; ++p) rows.row(p) = V.row(idx[static_cast<std::size_t>(p)]);
    rows = (U * rows).eval();
    for (Eigen::Index p = 0; p < b; ++p) V.row(idx[static_cast<std::size_t>(p)]) = rows.row(p);
  }
}

/// V <- exp(G_g) V on the truncated space.
inline void apply_unitary_columns(CMatrix& V, const Generator& g, std::size_t d, std::size_t modes) {
  require_layout(d, modes);
  require(generator_mode(g) < modes, "generator acts on a mode outside the system");
  require(V.rows() == static_cast<Eigen::Index>(total_dim(d, modes)),
          "apply_generator: operand size does not match its truncation");
  if (const auto* bs = std::get_if<Beamsplitter>(&g)) {
    apply_beamsplitter(V, bs->theta, d);
    return;
  }
  Generator local = g;  // same generator, relabelled onto a 1-mode space
  std::visit(
      [](auto& x) {
        if constexpr (!std::is_same_v<std::decay_t<decltype(x)>, Beamsplitter>) x.mode = 0;
      },
      local);
  const CMatrix U1 = exp_anti_hermitian(generator_matrix(local, d, 1));
  apply_mode_unitary(V, U1, generator_mode(g), d, modes);
}

}  // namespace detail

/// U rho U^dag with U = exp(G).
inline FockOperator apply_generator(const FockOperator& rho, const Generator& g) {
  CMatrix M = rho.matrix;
  detail::apply_unitary_columns(M, g, rho.dim, rho.modes);
  CMatrix Md = M.adjoint();
  detail::apply_unitary_columns(Md, g, rho.dim, rho.modes);
  return {rho.dim, rho.modes, Md.adjoint()};
}

/// Rotates the eigenvectors; the weights are untouched.
inline FockDensity apply_generator(const FockDensity& rho, const Generator& g) {
  FockDensity out = rho;
  detail::apply_unitary_columns(out.vectors, g, rho.dim, rho.modes);
  return out;
}

/// Spectral decomposition of a Hermitian PSD operator by dense eigensolver.
/// Eigenvalues in [-psd_tol, 0) are clamped to zero; more negative ones are rejected.
inline FockDensity spectral_density(const FockOperator& rho, const OracleOptions& opt = {}) {
  const CMatrix H = 0.5 * (rho.matrix + rho.matrix.adjoint());
  detail::require((rho.matrix - H).cwiseAbs().maxCoeff() <= 1e-10, "oracle: operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
  if (es.info() != Eigen::Success) throw NumericalFailure("oracle: eigensolver failed");
  Vector w = es.eigenvalues();
  detail::require(w.minCoeff() >= -opt.psd_tol,
                  "oracle: operator is not positive semidefinite (min eigenvalue " +
                      std::to_string(w.minCoeff()) + ")");
  w = w.cwiseMax(0.0);
  return {rho.dim, rho.modes, es.eigenvectors(), w, 1.0 - w.sum()};
}

namespace detail {

/// W(u) = W(u_0) (x) W(u_1) applied to the columns of V.
inline void apply_weyl_columns(CMatrix& V, const CVector& u, std::size_t d, std::size_t modes) {
  require(static_cast<std::size_t>(u.size()) == modes, "oracle_char_fn: argument length mismatch");
  const CMatrix a = annihilation_matrix(d).matrix;
  for (std::size_t k = 0; k < modes; ++k) {
    const Complex uk = u(static_cast<Eigen::Index>(k));
    const CMatrix W1 = exp_anti_hermitian(uk * a.adjoint() - std::conj(uk) * a);
    apply_mode_unitary(V, W1, k, d, modes);
  }
}

}  // namespace detail

/// Tr[exp(a^dag(u) - a(u)) rho], a^dag(u) = sum_k u_k a_k^dag.
inline Complex oracle_char_fn(const FockOperator& rho, const CVector& u) {
  detail::require_layout(rho.dim, rho.modes);
  CMatrix M = rho.matrix;
  detail::apply_weyl_columns(M, u, rho.dim, rho.modes);
  return M.trace();
}

/// Same, as sum_i w_i <v_i| W(u) |v_i>.
inline Complex oracle_char_fn(const FockDensity& rho, const CVector& u) {
  detail::require_layout(rho.dim, rho.modes);
  CMatrix WV = rho.vectors;
  detail::apply_weyl_columns(WV, u, rho.dim, rho.modes);
  const CVector diag = (rho.vectors.adjoint() * WV).diagonal();
  return (diag.array() * rho.weights.cast<Complex>().array()).sum();
}

/// -Tr rho ln rho from the eigenvalues above eig_floor.
inline double oracle_entropy(const FockDensity& rho, const OracleOptions& opt = {}) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < rho.weights.size(); ++i) {
    const double w = rho.weights(i);
    if (w > opt.eig_floor) s -= w * std::log(w);
  }
  return s;
}

/// Dense path: eigendecomposes the matrix first.
inline double oracle_entropy(const FockOperator& rho, const OracleOptions& opt = {}) {
  return oracle_entropy(spectral_density(rho, opt), opt);
}

namespace detail {

/// |<v_j | u_i>|^2 for sigma eigenvectors v_j (rows) and rho eigenvectors u_i (columns).
inline Matrix overlap_weights(const FockDensity& rho, const FockDensity& sigma) {
  require(rho.dim == sigma.dim && rho.modes == sigma.modes,
          "oracle: operands have different truncations");
  return (sigma.vectors.adjoint() * rho.vectors).cwiseAbs2();
}

inline ExtendedReal relative_entropy_from_spectra(const FockDensity& rho, const FockDensity& sigma,
                                                  double support_floor, const OracleOptions& opt) {
  const Matrix P = overlap_weights(rho, sigma);
  const Vector mass = P * rho.weights;  // <v_j| rho |v_j>
  // Zero-weight sigma vectors may have been dropped, so the mass outside the
  // support is Tr rho minus the mass on the kept support.
  double inside = 0.0, cross = 0.0;
  for (Eigen::Index j = 0; j < mass.size(); ++j) {
    const double mu = sigma.weights(j);
    if (mu > support_floor) {
      inside += mass(j);
      cross += mass(j) * std::log(mu);
    }
  }
  const double outside = rho.weights.sum() - inside;
  if (outside > opt.mass_tol) return ExtendedReal::infinity();
  return ExtendedReal(-oracle_entropy(rho, opt) - cross);
}

}  // namespace detail

/// Tr rho (ln rho - ln sigma) in the recipe eigenbases. An eigenvalue of sigma is
/// outside the support only if it is exactly zero (spectral weights are exact).
inline ExtendedReal oracle_relative_entropy(const FockDensity& rho, const FockDensity& sigma,
                                            const OracleOptions& opt = {}) {
  return detail::relative_entropy_from_spectra(rho, sigma, 0.0, opt);
}

/// Dense path: eigendecomposes both matrices, sigma eigenvalues <= eig_floor count as zero.
inline ExtendedReal oracle_relative_entropy(const FockOperator& rho, const FockOperator& sigma,
                                            const OracleOptions& opt = {}) {
  return detail::relative_entropy_from_spectra(spectral_density(rho, opt), spectral_density(sigma, opt),
                                               opt.eig_floor, opt);
}

/// Tr rho^alpha sigma^{1-alpha} = sum_{ij} w_i^alpha mu_j^{1-alpha} |<v_j|u_i>|^2.
inline double oracle_trace_power_overlap(const FockDensity& rho, const FockDensity& sigma, double alpha) {
  gaussent::detail::require_alpha(alpha);
  const Matrix P = detail::overlap_weights(rho, sigma);
  const Vector wa = rho.weights.array().pow(alpha).matrix();
  const Vector mb = sigma.weights.array().pow(1.0 - alpha).matrix();
  return mb.dot(P * wa);
}

/// ln Tr(rho^alpha sigma^{1-alpha}) / (alpha - 1); +inf for orthogonal supports.
inline ExtendedReal oracle_petz_renyi(const FockDensity& rho, const FockDensity& sigma, double alpha) {
  const double overlap = oracle_trace_power_overlap(rho, sigma, alpha);
  if (!(overlap > 0.0)) return ExtendedReal::infinity();
  return ExtendedReal(std::log(overlap) / (alpha - 1.0));
}

inline ExtendedReal oracle_petz_renyi(const FockOperator& rho, const FockOperator& sigma, double alpha,
                                      const OracleOptions& opt = {}) {
  return oracle_petz_renyi(spectral_density(rho, opt), spectral_density(sigma, opt), alpha);
}

/// Thermal layer followed by generators; the dual (Fock, Gaussian) description of a state.
struct Recipe {
  std::vector<InverseTemperature> thermal;  // one per mode
  std::vector<Generator> ops;               // applied in order

  std::size_t modes() const { return thermal.size(); }

  FockDensity to_fock(std::size_t d) const {
    FockDensity rho = thermal_density(std::span<const InverseTemperature>(thermal), d);
    for (const Generator& g : ops) rho = apply_generator(rho, g);
    return rho;
  }

  GaussianState to_gaussian() const {
    detail::require(modes() == 1 || modes() == 2, "recipe: only 1- and 2-mode recipes are supported");
    const auto n = static_cast<Eigen::Index>(modes());
    Vector nu(n);
    for (Eigen::Index k = 0; k < n; ++k) nu(k) = thermal[static_cast<std::size_t>(k)].symplectic_eigenvalue();
    Matrix C = doubled_diagonal(nu);
    CVector m = CVector::Zero(n);
    for (const Generator& g : ops) {
      detail::require(detail::generator_mode(g) < modes(), "recipe: generator acts outside the system");
      const detail::Bogoliubov h = detail::heisenberg_action(g, modes());
      m = h.A * m + h.B * m.conjugate() + h.c;
      const Matrix S = detail::phase_space_map(h.A, h.B);
      C = S * C * S.transpose();
    }
    return GaussianState(m, C);
  }
};

/// Oracle value at truncation d and 2d, accepted only if they agree within tol.
struct TruncationGate {
  ExtendedReal at_d;
  ExtendedReal at_2d;
  bool converged = false;
};

inline TruncationGate truncation_gate(const std::function<ExtendedReal(std::size_t)>& eval, std::size_t d,
                                      double tol) {
  TruncationGate g{eval(d), eval(2 * d), false};
  if (g.at_d.is_infinite() || g.at_2d.is_infinite()) {
    g.converged = g.at_d.is_infinite() && g.at_2d.is_infinite();
  } else {
    g.converged = std::abs(g.at_d.value() - g.at_2d.value()) <= tol;
  }
  return g;
}

/// Thrown when a Gaussian state cannot be expressed with the generator set.
class Unrepresentable : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

namespace detail {

/// Generators realizing a passive (orthogonal symplectic) phase-space map O.
inline std::vector<Generator> passive_generators(const Matrix& O) {
  const Eigen::Index n = O.rows() / 2;
  const CMatrix A = O.topLeftCorner(n, n).cast<Complex>() + Complex(0.0, 1.0) * O.bottomLeftCorner(n, n);
  std::vector<Generator> ops;
  if (n == 1) {
    ops.push_back(Rotation{0, -std::arg(A(0, 0))});
    return ops;
  }
  // A = diag(e^{i f0}, e^{i f1}) BS(theta) diag(1, e^{i g1}); applied right to left.
  const double c = std::min(1.0, std::abs(A(0, 0)));
  const double theta = std::acos(c);
  double f0 = 0.0, f1 = 0.0, g1 = 0.0;
  if (std::abs(A(0, 1)) < 1e-12) {
    f0 = std::arg(A(0, 0));
    f1 = std::arg(A(1, 1));
  } else if (std::abs(A(0, 0)) < 1e-12) {
    f0 = std::arg(A(0, 1));
    f1 = std::arg(-A(1, 0));
  } else {
    f0 = std::arg(A(0, 0));
    f1 = std::arg(-A(1, 0));
    g1 = std::arg(A(0, 1)) - f0;
  }
  ops.push_back(Rotation{1, -g1});
  ops.push_back(Beamsplitter{theta});
  ops.push_back(Rotation{0, -f0});
  ops.push_back(Rotation{1, -f1});
  return ops;
}

}  // namespace detail

/// Recipe reproducing a 1- or 2-mode Gaussian state: thermal layer, passive
/// network, single-mode squeezers, passive network, displacements.
///
/// Throws Unrepresentable for three or more modes, or if the synthesized recipe
/// fails to reproduce the state within tol.
inline Recipe recipe_from_state(const GaussianState& state, double tol = 1e-8) {
  if (state.modes() > 2) {
    throw Unrepresentable("oracle supports 1- and 2-mode states only (got " + std::to_string(state.modes()) +
                          " modes)");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(state.modes());
  const StandardForm sf = standard_form(state);
  const Matrix J = symplectic_form(state.modes());

  // Covariance is S D S^T with S = L^T. Split S = P O (polar), P = Q Z Q^T.
  const Matrix S = sf.L.transpose();
  const Matrix P = sqrt_spd(S * S.transpose(), 1e-7);
  const Matrix O = P.ldlt().solve(S);
  const SymmetricEigen pe = eig_symmetric(P, 1e-7);

  Matrix V(2 * n, n);
  Eigen::Index chosen = 0;
  for (Eigen::Index i = 2 * n - 1; i >= 0 && chosen < n; --i) {
    Vector v = pe.vectors.col(i);
    for (Eigen::Index j = 0; j < chosen; ++j) {
      const Vector u = V.col(j), Ju = J * u;
      v -= u.dot(v) * u + Ju.dot(v) * Ju;
    }
    if (v.norm() < 1e-6) continue;
    V.col(chosen++) = v.normalized();
  }
  if (chosen != n) throw NumericalFailure("recipe_from_state: could not build a symplectic eigenbasis");
  Matrix Q(2 * n, 2 * n);
  Q << V, -J * V;

  Recipe recipe;
  recipe.thermal = sf.s;
  const Matrix O2 = Q.transpose() * O;
  for (const Generator& g : detail::passive_generators(O2)) recipe.ops.push_back(g);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lambda = V.col(k).dot(P * V.col(k));
    recipe.ops.push_back(Squeeze{static_cast<std::size_t>(k), std::log(lambda), 0.0});
  }
  for (const Generator& g : detail::passive_generators(Q)) recipe.ops.push_back(g);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (state.mean()(k) != Complex(0.0, 0.0)) {
      recipe.ops.push_back(Displacement{static_cast<std::size_t>(k), state.mean()(k)});
    }
  }

  const GaussianState rebuilt = recipe.to_gaussian();
  const double cov_err = (rebuilt.cov() - state.cov()).cwiseAbs().maxCoeff();
  const double mean_err = (rebuilt.mean() - state.mean()).cwiseAbs().maxCoeff();
  if (cov_err > tol * (1.0 + state.cov().cwiseAbs().maxCoeff()) || mean_err > tol) {
    throw Unrepresentable("recipe_from_state: generator decomposition does not reproduce the state (cov error " +
                          std::to_string(cov_err) + ", mean error " + std::to_string(mean_err) + ")");
  }
  return recipe;
}

}  // namespace gaussent::oracle
