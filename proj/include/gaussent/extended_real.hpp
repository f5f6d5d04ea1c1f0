#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>
#include <string>

#include "gaussent/error.hpp"

namespace gaussent {

/// A finite real number or the distinguished value +inf.
///
/// Divergences can be legitimately infinite (a mixed state measured against a
/// pure one), and that answer must never be confused with a floating-point
/// overflow. Construction from a non-finite double is therefore an error;
/// +inf is only reachable through ExtendedReal::infinity().
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;

  explicit ExtendedReal(double value) : value_(value) {
    if (!std::isfinite(value)) {
      throw NumericalFailure("non-finite intermediate value: " + std::to_string(value));
    }
  }

  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  /// Finite value. Throws if the value is +inf.
  double value() const {
    if (infinite_) throw InvalidArgument("value() called on an infinite ExtendedReal");
    return value_;
  }

  /// Finite value, or std::numeric_limits<double>::infinity() for +inf.
  constexpr double as_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend constexpr std::partial_ordering operator<=>(const ExtendedReal& a,
                                                     const ExtendedReal& b) {
    return a.as_double() <=> b.as_double();
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtendedReal& x) {
    if (x.infinite_) return os << "inf";
    return os << x.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

/// Inverse temperature s in (0, inf] of a single-mode thermal state.
///
/// s = inf encodes the vacuum (a pure mode). Helpers return the limiting values
/// at s = inf exactly: e^{-s} = 0 and (1/2)coth(s/2) = 1/2.
class InverseTemperature {
 public:
  explicit InverseTemperature(double s) : s_(s) {
    detail::require(std::isfinite(s) && s > 0.0,
                    "inverse temperature must be finite and positive (use infinity() for the vacuum)");
  }

  static InverseTemperature infinity() { return InverseTemperature(); }

  /// s = ln((nu + 1/2) / (nu - 1/2)); nu <= 1/2 + pure_tol maps to s = inf.
  static InverseTemperature from_symplectic_eigenvalue(double nu, double pure_tol = 1e-10) {
    if (!(nu - 0.5 > pure_tol)) return infinity();
    return InverseTemperature(std::log1p(1.0 / (nu - 0.5)));
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  double value() const {
    if (infinite_) throw InvalidArgument("value() called on an infinite inverse temperature");
    return s_;
  }

  ExtendedReal extended() const {
    return infinite_ ? ExtendedReal::infinity() : ExtendedReal(s_);
  }

  /// Success probability e^{-s} of the associated Bernoulli trial.
  double success_probability() const { return infinite_ ? 0.0 : std::exp(-s_); }

  /// 1 - e^{-s}, evaluated without cancellation for small s.
  double failure_probability() const { return infinite_ ? 1.0 : -std::expm1(-s_); }

  /// Symplectic eigenvalue (1/2)coth(s/2) of the thermal covariance.
  double symplectic_eigenvalue() const {
    if (infinite_) return 0.5;
    return 0.5 * (1.0 + std::exp(-s_)) / failure_probability();
  }

  /// c * s for c > 0, with c * inf = inf.
  InverseTemperature scaled(double c) const {
    detail::require(c > 0.0, "inverse temperature scale must be positive");
    return infinite_ ? infinity() : InverseTemperature(c * s_);
  }

  friend bool operator==(const InverseTemperature& a, const InverseTemperature& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.s_ == b.s_);
  }
  friend std::partial_ordering operator<=>(const InverseTemperature& a,
                                           const InverseTemperature& b) {
    return a.extended() <=> b.extended();
  }

  friend std::ostream& operator<<(std::ostream& os, const InverseTemperature& s) {
    return os << s.extended();
  }

 private:
  InverseTemperature() : infinite_(true) {}

  double s_ = 0.0;
  bool infinite_ = false;
};

}  // namespace gaussent
