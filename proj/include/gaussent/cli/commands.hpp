#pragma once

// Command implementations behind the gaussent executable. Each returns a Report
// holding the exit code, a JSON record and the human-readable text; main() only
// parses flags and prints one of the two.
//
// Exit codes: 0 success (finite result), 2 infinite divergence, 1 error,
// invalid input, refusal or failed verification.

#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>  // vendored nlohmann/json

#include "gaussent/entropy.hpp"
#include "gaussent/fock_oracle.hpp"
#include "gaussent/gaussian_state.hpp"
#include "gaussent/linalg.hpp"
#include "gaussent/state_file.hpp"

namespace gaussent::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfinite = 2;

struct Report {
  int exit_code = kExitOk;
  json record;
  std::string text;
};

struct Options {
  bool bits = false;
  double tol = kDefaultTol;
};

struct VerifyOptions {
  std::size_t truncation = 0;  // 0 picks 60 for one mode, 16 for two
  std::vector<double> alphas{0.3, 0.5, 0.9};
  double tol = 1e-5;
};

namespace detail {

/// FNV-1a, 64 bit.
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

inline std::string fmt(double x) {
  std::ostringstream ss;
  ss << std::setprecision(10) << x;
  return ss.str();
}

inline std::string fmt(const ExtendedReal& x) { return x.is_infinite() ? "inf" : fmt(x.value()); }

inline json to_json(const ExtendedReal& x) { return x.is_infinite() ? json("inf") : json(x.value()); }

inline json to_json(InverseTemperature s) { return s.is_infinite() ? json("inf") : json(s.value()); }

inline json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

inline json to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back({v(k).real(), v(k).imag()});
  return out;
}

inline double unit_scale(const Options& opt) { return opt.bits ? 1.0 / std::log(2.0) : 1.0; }
inline const char* unit_name(const Options& opt) { return opt.bits ? "bits" : "nats"; }

inline ExtendedReal scaled(const ExtendedReal& x, double c) {
  return x.is_infinite() ? x : ExtendedReal(c * x.value());
}

struct LoadedState {
  std::string path;
  std::string digest;
  io::StateFile file;
};

inline LoadedState load(const std::string& path) {
  const std::string bytes = io::read_text_file(path);
  return {path, fnv1a_hex(bytes), io::parse_state_file(bytes)};
}

inline json input_record(const LoadedState& s) {
  json j{{"path", s.path}, {"fnv1a64", s.digest}, {"modes", s.file.modes}};
  if (s.file.label) j["label"] = *s.file.label;
  return j;
}

inline json base_record(const std::string& command, const std::vector<LoadedState>& inputs) {
  json j{{"command", command}, {"inputs", json::array()}};
  for (const LoadedState& s : inputs) j["inputs"].push_back(input_record(s));
  return j;
}

inline std::string label_of(const LoadedState& s) { return s.file.label ? *s.file.label : s.path; }

/// Runs body; any library or file error becomes an exit-1 report naming its kind.
inline Report guarded(const std::string& command, const std::function<Report()>& body) {
  auto fail = [&](const std::string& kind, const std::string& message) {
    Report r;
    r.exit_code = kExitError;
    r.record = {{"command", command}, {"error", {{"kind", kind}, {"message", message}}}};
    r.text = command + ": " + message + "\n";
    return r;
  };
  try {
    return body();
  } catch (const io::StateFileError& e) {
    return fail(io::to_string(e.kind()), e.what());
  } catch (const oracle::Unrepresentable& e) {
    return fail("unrepresentable", e.what());
  } catch (const InvalidArgument& e) {
    return fail("invalid_argument", e.what());
  } catch (const NumericalFailure& e) {
    return fail("numerical_failure", e.what());
  } catch (const std::exception& e) {
    return fail("error", e.what());
  }
}

}  // namespace detail

/// Validity verdict and the minimum eigenvalue of C + iJ/2.
inline Report cmd_validate(const std::string& path, const Options& opt = {}) {
  return detail::guarded("validate", [&] {
    const detail::LoadedState in = detail::load(path);
    Report r;
    r.record = detail::base_record("validate", {in});
    r.record["tol"] = opt.tol;
    try {
      io::to_state(in.file, opt.tol);
    } catch (const io::StateFileError& e) {
      r.exit_code = kExitError;
      r.record["valid"] = false;
      r.record["violation"] = io::to_string(e.kind());
      r.record["message"] = e.what();
      if (e.kind() == io::DiagnosticKind::Uncertainty) {
        r.record["min_eigenvalue"] = min_uncertainty_eigenvalue(in.file.covariance, opt.tol);
      }
      r.text = detail::label_of(in) + ": invalid (" + e.what() + ")\n";
      return r;
    }
    const double min_eig = min_uncertainty_eigenvalue(in.file.covariance, opt.tol);
    r.record["valid"] = true;
    r.record["min_eigenvalue"] = min_eig;
    r.text = detail::label_of(in) + ": valid, " + std::to_string(in.file.modes) +
             " mode(s), min eigenvalue of C + iJ/2 = " + detail::fmt(min_eig) + "\n";
    return r;
  });
}

inline Report cmd_williamson(const std::string& path, const Options& opt = {}) {
  return detail::guarded("williamson", [&] {
    const detail::LoadedState in = detail::load(path);
    const GaussianState rho = io::to_state(in.file, opt.tol);
    const WilliamsonForm wf = williamson(rho.cov(), opt.tol);
    const Matrix J = symplectic_form(rho.modes());
    const double symp = gaussent::detail::max_abs(wf.L.transpose() * J * wf.L - J);
    const double recon = gaussent::detail::max_abs(wf.L.transpose() * doubled_diagonal(wf.nu) * wf.L - rho.cov());

    Report r;
    r.record = detail::base_record("williamson", {in});
    r.record["nu"] = std::vector<double>(wf.nu.data(), wf.nu.data() + wf.nu.size());
    r.record["L"] = detail::to_json(wf.L);
    r.record["symplectic_residual"] = symp;
    r.record["reconstruction_residual"] = recon;
    std::ostringstream t;
    t << detail::label_of(in) << "\n  nu:";
    for (Eigen::Index k = 0; k < wf.nu.size(); ++k) t << ' ' << detail::fmt(wf.nu(k));
    t << "\n  symplectic residual:     " << detail::fmt(symp)
      << "\n  reconstruction residual: " << detail::fmt(recon) << "\n";
    r.text = t.str();
    return r;
  });
}

inline Report cmd_standard_form(const std::string& path, const Options& opt = {}) {
  return detail::guarded("standard-form", [&] {
    const detail::LoadedState in = detail::load(path);
    const GaussianState rho = io::to_state(in.file, opt.tol);
    const StandardForm sf = standard_form(rho, kPureModeTol, opt.tol);

    Report r;
    r.record = detail::base_record("standard-form", {in});
    r.record["s"] = json::array();
    for (InverseTemperature s : sf.s) r.record["s"].push_back(detail::to_json(s));
    r.record["ell"] = detail::to_json(sf.ell);
    r.record["L"] = detail::to_json(sf.L);
    std::ostringstream t;
    t << detail::label_of(in) << "\n  s:";
    for (InverseTemperature s : sf.s) t << ' ' << (s.is_infinite() ? std::string("inf") : detail::fmt(s.value()));
    t << "\n  ell:";
    for (Eigen::Index k = 0; k < sf.ell.size(); ++k) {
      t << " (" << detail::fmt(sf.ell(k).real()) << ", " << detail::fmt(sf.ell(k).imag()) << ")";
    }
    t << "\n";
    r.text = t.str();
    return r;
  });
}

/// von Neumann entropy; with displacement, of W(z) rho W(z)^dag instead.
inline Report cmd_vn_entropy(const std::string& path, const Options& opt = {},
                             const std::optional<CVector>& displacement = std::nullopt) {
  return detail::guarded("vn-entropy", [&] {
    const detail::LoadedState in = detail::load(path);
    GaussianState rho = io::to_state(in.file, opt.tol);
    if (displacement) rho = displace(rho, *displacement);
    const double value = von_neumann_entropy(rho, opt.tol) * detail::unit_scale(opt);

    Report r;
    r.record = detail::base_record("vn-entropy", {in});
    r.record["units"] = detail::unit_name(opt);
    if (displacement) r.record["displacement"] = detail::to_json(*displacement);
    r.record["value"] = value;
    r.text = detail::label_of(in) + ": S = " + detail::fmt(value) + " " + detail::unit_name(opt) + "\n";
    return r;
  });
}

inline Report cmd_rel_entropy(const std::string& rho_path, const std::string& sigma_path, const Options& opt = {}) {
  return detail::guarded("rel-entropy", [&] {
    const detail::LoadedState a = detail::load(rho_path), b = detail::load(sigma_path);
    const GaussianState rho = io::to_state(a.file, opt.tol), sigma = io::to_state(b.file, opt.tol);
    DivergenceOptions dopt;
    dopt.tol = opt.tol;
    const DivergenceResult d = relative_entropy(rho, sigma, dopt);
    const double c = detail::unit_scale(opt);

    Report r;
    r.record = detail::base_record("rel-entropy", {a, b});
    r.record["units"] = detail::unit_name(opt);
    r.record["value"] = detail::to_json(detail::scaled(d.value, c));
    std::ostringstream t;
    t << "S(" << detail::label_of(a) << " || " << detail::label_of(b) << ") = " << detail::fmt(detail::scaled(d.value, c))
      << " " << detail::unit_name(opt) << "\n";
    if (d.value.is_infinite()) {
      r.exit_code = kExitInfinite;
      r.record["infinite_mode"] = d.infinite_mode ? json(*d.infinite_mode) : json(nullptr);
      if (d.infinite_mode) {
        t << "  mode " << *d.infinite_mode << " of sigma is pure and rho's marginal there is not the vacuum\n";
      }
      r.text = t.str();
      return r;
    }
    r.record["classical_part"] = c * d.classical_part;
    r.record["quantum_part"] = c * d.quantum_part;
    r.record["per_mode"] = json::array();
    t << "  classical part: " << detail::fmt(c * d.classical_part) << "\n  quantum part:   "
      << detail::fmt(c * d.quantum_part) << "\n  mode  classical  quantum\n";
    for (std::size_t k = 0; k < d.per_mode.size(); ++k) {
      r.record["per_mode"].push_back({{"classical", c * d.per_mode[k].classical}, {"quantum", c * d.per_mode[k].quantum}});
      t << "  " << k << "  " << detail::fmt(c * d.per_mode[k].classical) << "  " << detail::fmt(c * d.per_mode[k].quantum)
        << "\n";
    }
    r.text = t.str();
    return r;
  });
}

/// Sweep of alpha values: `steps` points from a to b inclusive.
struct Sweep {
  double a = 0.5;
  double b = 0.999;
  std::size_t steps = 10;
};

/// Parses "a:b:steps".
inline Sweep parse_sweep(const std::string& spec) {
  Sweep s;
  std::istringstream in(spec);
  char c1 = 0, c2 = 0;
  long long steps = 0;
  if (!(in >> s.a >> c1 >> s.b >> c2 >> steps) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof()) {
    throw InvalidArgument("--sweep expects a:b:steps, got '" + spec + "'");
  }
  gaussent::detail::require(steps >= 2, "--sweep needs at least 2 steps");
  gaussent::detail::require(s.a > 0.0 && s.b < 1.0 && s.a < s.b, "--sweep needs 0 < a < b < 1");
  s.steps = static_cast<std::size_t>(steps);
  return s;
}

inline Report cmd_petz_renyi(const std::string& rho_path, const std::string& sigma_path, double alpha,
                             const Options& opt = {}, const std::optional<Sweep>& sweep = std::nullopt) {
  return detail::guarded("petz-renyi", [&] {
    const detail::LoadedState a = detail::load(rho_path), b = detail::load(sigma_path);
    const GaussianState rho = io::to_state(a.file, opt.tol), sigma = io::to_state(b.file, opt.tol);
    DivergenceOptions dopt;
    dopt.tol = opt.tol;
    const double c = detail::unit_scale(opt);

    Report r;
    r.record = detail::base_record("petz-renyi", {a, b});
    r.record["units"] = detail::unit_name(opt);
    std::ostringstream t;
    if (!sweep) {
      const PetzRenyiResult p = petz_renyi(rho, sigma, alpha, dopt);
      r.record["alpha"] = alpha;
      r.record["value"] = detail::to_json(detail::scaled(p.value, c));
      r.record["terms"] = {{"R1", c * p.terms.r1}, {"R2", c * p.terms.r2}, {"R3", c * p.terms.r3}, {"R4", c * p.terms.r4}};
      t << "S_" << detail::fmt(alpha) << "(" << detail::label_of(a) << " || " << detail::label_of(b)
        << ") = " << detail::fmt(detail::scaled(p.value, c)) << " " << detail::unit_name(opt) << "\n"
        << "  R1 = " << detail::fmt(c * p.terms.r1) << "\n  R2 = " << detail::fmt(c * p.terms.r2)
        << "\n  R3 = " << detail::fmt(c * p.terms.r3) << "\n  R4 = " << detail::fmt(c * p.terms.r4) << "\n";
      if (p.value.is_infinite()) r.exit_code = kExitInfinite;
      r.text = t.str();
      return r;
    }
    const ExtendedReal limit = detail::scaled(relative_entropy(rho, sigma, dopt).value, c);
    r.record["sweep"] = {{"a", sweep->a}, {"b", sweep->b}, {"steps", sweep->steps}};
    r.record["relative_entropy"] = detail::to_json(limit);
    r.record["table"] = json::array();
    t << "alpha  S_alpha  S - S_alpha   (S = " << detail::fmt(limit) << ")\n";
    bool any_infinite = false;
    for (std::size_t i = 0; i < sweep->steps; ++i) {
      const double x = sweep->a + (sweep->b - sweep->a) * static_cast<double>(i) / static_cast<double>(sweep->steps - 1);
      const ExtendedReal v = detail::scaled(petz_renyi(rho, sigma, x, dopt).value, c);
      any_infinite = any_infinite || v.is_infinite();
      json row{{"alpha", x}, {"value", detail::to_json(v)}};
      t << detail::fmt(x) << "  " << detail::fmt(v);
      if (!v.is_infinite() && !limit.is_infinite()) {
        row["gap"] = limit.value() - v.value();
        t << "  " << detail::fmt(limit.value() - v.value());
      }
      t << "\n";
      r.record["table"].push_back(row);
    }
    if (any_infinite) r.exit_code = kExitInfinite;
    r.text = t.str();
    return r;
  });
}

namespace detail {

struct Comparison {
  std::string quantity;
  ExtendedReal closed;
  oracle::TruncationGate gate;
  bool pass = false;
};

inline double gap(const ExtendedReal& x, const ExtendedReal& y) {
  if (x.is_infinite() || y.is_infinite()) return x == y ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(x.value() - y.value());
}

}  // namespace detail

/// Closed form against the truncated Fock oracle at d and 2d. A comparison
/// passes when the oracle has converged (|O(d) - O(2d)| <= tol) and
/// |closed - O(d)| <= tol. Refuses states the oracle cannot build.
inline Report cmd_verify(const std::string& rho_path, const std::string& sigma_path, const VerifyOptions& vopt = {},
                         const Options& opt = {}) {
  return detail::guarded("verify", [&] {
    const detail::LoadedState a = detail::load(rho_path), b = detail::load(sigma_path);
    const GaussianState rho = io::to_state(a.file, opt.tol), sigma = io::to_state(b.file, opt.tol);
    Report r;
    r.record = detail::base_record("verify", {a, b});
    if (rho.modes() != sigma.modes() || rho.modes() > 2) {
      r.exit_code = kExitError;
      const std::string why = rho.modes() != sigma.modes()
                                  ? "states have different mode counts"
                                  : "the Fock oracle handles 1- and 2-mode states only (got " +
                                        std::to_string(rho.modes()) + " modes)";
      r.record["refused"] = why;
      r.text = "verify refused: " + why + "\n";
      return r;
    }
    for (double alpha : vopt.alphas) gaussent::detail::require_alpha(alpha);
    const oracle::Recipe ra = oracle::recipe_from_state(rho), rb = oracle::recipe_from_state(sigma);
    const std::size_t d = vopt.truncation != 0 ? vopt.truncation : (rho.modes() == 1 ? 60 : 16);

    // Fock densities at d and 2d, built once.
    const oracle::FockDensity fa_d = ra.to_fock(d), fb_d = rb.to_fock(d);
    const oracle::FockDensity fa_2d = ra.to_fock(2 * d), fb_2d = rb.to_fock(2 * d);
    auto pick = [&](std::size_t k, bool first) -> const oracle::FockDensity& {
      return k == d ? (first ? fa_d : fb_d) : (first ? fa_2d : fb_2d);
    };

    std::vector<detail::Comparison> rows;
    auto add = [&](std::string name, ExtendedReal closed, const std::function<ExtendedReal(std::size_t)>& eval) {
      detail::Comparison c{std::move(name), closed, oracle::truncation_gate(eval, d, vopt.tol), false};
      c.pass = c.gate.converged && detail::gap(c.closed, c.gate.at_d) <= vopt.tol;
      rows.push_back(std::move(c));
    };
    add("S(rho)", ExtendedReal(von_neumann_entropy(rho, opt.tol)),
        [&](std::size_t k) { return ExtendedReal(oracle::oracle_entropy(pick(k, true))); });
    add("S(sigma)", ExtendedReal(von_neumann_entropy(sigma, opt.tol)),
        [&](std::size_t k) { return ExtendedReal(oracle::oracle_entropy(pick(k, false))); });
    DivergenceOptions dopt;
    dopt.tol = opt.tol;
    add("S(rho||sigma)", relative_entropy(rho, sigma, dopt).value,
        [&](std::size_t k) { return oracle::oracle_relative_entropy(pick(k, true), pick(k, false)); });
    for (double alpha : vopt.alphas) {
      add("S_" + detail::fmt(alpha) + "(rho||sigma)", petz_renyi(rho, sigma, alpha, dopt).value,
          [&](std::size_t k) { return oracle::oracle_petz_renyi(pick(k, true), pick(k, false), alpha); });
    }

    bool all = true;
    r.record["truncation"] = d;
    r.record["tol"] = vopt.tol;
    r.record["tail_mass"] = {{"rho", fa_d.tail_mass}, {"sigma", fb_d.tail_mass}};
    r.record["comparisons"] = json::array();
    std::ostringstream t;
    t << "truncation d = " << d << " (gate at " << 2 * d << "), tol = " << detail::fmt(vopt.tol) << "\n"
      << "quantity  closed  oracle(d)  oracle(2d)  |diff|  result\n";
    for (const detail::Comparison& c : rows) {
      all = all && c.pass;
      const double diff = detail::gap(c.closed, c.gate.at_d);
      r.record["comparisons"].push_back({{"quantity", c.quantity},
                                         {"closed_form", detail::to_json(c.closed)},
                                         {"oracle_d", detail::to_json(c.gate.at_d)},
                                         {"oracle_2d", detail::to_json(c.gate.at_2d)},
                                         {"abs_diff", std::isfinite(diff) ? json(diff) : json("inf")},
                                         {"converged", c.gate.converged},
                                         {"pass", c.pass}});
      t << c.quantity << "  " << detail::fmt(c.closed) << "  " << detail::fmt(c.gate.at_d) << "  "
        << detail::fmt(c.gate.at_2d) << "  " << (std::isfinite(diff) ? detail::fmt(diff) : std::string("inf")) << "  "
        << (c.pass ? "pass" : (c.gate.converged ? "FAIL" : "FAIL (truncation not converged)")) << "\n";
    }
    r.record["pass"] = all;
    r.exit_code = all ? kExitOk : kExitError;
    r.text = t.str();
    return r;
  });
}

}  // namespace gaussent::cli
