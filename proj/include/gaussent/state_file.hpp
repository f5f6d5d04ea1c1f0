#pragma once

// JSON state files.
//
//     {
//       "modes": 1,
//       "mean": [[0.7, 0.0]],
//       "covariance": [[0.5, 0.0], [0.0, 0.5]],
//       "label": "coherent 0.7"
//     }
//
// mean holds one [re, im] pair per mode; covariance is 2n x 2n, row-major, in
// (x_1..x_n, y_1..y_n) ordering. label is optional.

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>  // vendored nlohmann/json

#include "gaussent/error.hpp"
#include "gaussent/gaussian_state.hpp"
#include "gaussent/linalg.hpp"

namespace gaussent::io {

enum class DiagnosticKind { Io, Parse, Schema, Asymmetric, Uncertainty };

inline const char* to_string(DiagnosticKind k) {
  switch (k) {
    case DiagnosticKind::Io: return "io";
    case DiagnosticKind::Parse: return "parse";
    case DiagnosticKind::Schema: return "schema";
    case DiagnosticKind::Asymmetric: return "asymmetric";
    case DiagnosticKind::Uncertainty: return "uncertainty";
  }
  return "unknown";
}

/// Names the violated invariant of a state file.
class StateFileError : public InvalidArgument {
 public:
  StateFileError(DiagnosticKind kind, const std::string& message)
      : InvalidArgument(std::string(to_string(kind)) + " error: " + message), kind_(kind) {}
  DiagnosticKind kind() const { return kind_; }

 private:
  DiagnosticKind kind_;
};

/// Schema-checked contents of a file; not yet validated as a state.
struct StateFile {
  std::size_t modes = 0;
  CVector mean;
  Matrix covariance;
  std::optional<std::string> label;
};

namespace detail {

inline double number_at(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number()) throw StateFileError(DiagnosticKind::Schema, where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw StateFileError(DiagnosticKind::Schema, where + " is not finite");
  return x;
}

}  // namespace detail

inline StateFile parse_state_file(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw StateFileError(DiagnosticKind::Parse, e.what());
  }
  if (!j.is_object()) throw StateFileError(DiagnosticKind::Schema, "top level must be an object");
  for (const char* key : {"modes", "mean", "covariance"}) {
    if (!j.contains(key)) throw StateFileError(DiagnosticKind::Schema, std::string("missing field '") + key + "'");
  }
  const auto& jm = j["modes"];
  if (!jm.is_number_integer() || jm.get<long long>() < 1) {
    throw StateFileError(DiagnosticKind::Schema, "'modes' must be a positive integer");
  }
  StateFile f;
  f.modes = jm.get<std::size_t>();
  const auto n = static_cast<Eigen::Index>(f.modes);

  const auto& mean = j["mean"];
  if (!mean.is_array() || mean.size() != f.modes) {
    throw StateFileError(DiagnosticKind::Schema, "'mean' must be a list of " + std::to_string(f.modes) +
                                                     " [re, im] pairs");
  }
  f.mean.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& pair = mean[static_cast<std::size_t>(k)];
    const std::string where = "mean[" + std::to_string(k) + "]";
    if (!pair.is_array() || pair.size() != 2) throw StateFileError(DiagnosticKind::Schema, where + " must be [re, im]");
    f.mean(k) = {detail::number_at(pair[0], where + "[0]"), detail::number_at(pair[1], where + "[1]")};
  }

  const auto& cov = j["covariance"];
  const std::size_t dim = 2 * f.modes;
  if (!cov.is_array() || cov.size() != dim) {
    throw StateFileError(DiagnosticKind::Schema, "'covariance' must have " + std::to_string(dim) + " rows");
  }
  f.covariance.resize(2 * n, 2 * n);
  for (std::size_t r = 0; r < dim; ++r) {
    const auto& row = cov[r];
    if (!row.is_array() || row.size() != dim) {
      throw StateFileError(DiagnosticKind::Schema,
                           "covariance row " + std::to_string(r) + " must have " + std::to_string(dim) + " entries");
    }
    for (std::size_t c = 0; c < dim; ++c) {
      f.covariance(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          detail::number_at(row[c], "covariance[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw StateFileError(DiagnosticKind::Schema, "'label' must be a string");
    f.label = j["label"].get<std::string>();
  }
  return f;
}

/// Asymmetry and the uncertainty inequality are reported as distinct kinds.
inline GaussianState to_state(const StateFile& f, double tol = kDefaultTol) {
  const double scale = std::max(1.0, gaussent::detail::max_abs(f.covariance));
  const double asym = gaussent::detail::max_abs(f.covariance - f.covariance.transpose());
  if (asym > tol * scale) {
    throw StateFileError(DiagnosticKind::Asymmetric,
                         "covariance is not symmetric (max |C - C^T| = " + std::to_string(asym) + ")");
  }
  const double min_eig = min_uncertainty_eigenvalue(f.covariance, tol);
  if (min_eig < -tol) {
    throw StateFileError(DiagnosticKind::Uncertainty,
                         "covariance violates C + iJ/2 >= 0 (min eigenvalue " + std::to_string(min_eig) + ")");
  }
  return GaussianState(f.mean, f.covariance, tol);
}

inline nlohmann::json to_json(const StateFile& f) {
  nlohmann::json j;
  j["modes"] = f.modes;
  j["mean"] = nlohmann::json::array();
  for (Eigen::Index k = 0; k < f.mean.size(); ++k) j["mean"].push_back({f.mean(k).real(), f.mean(k).imag()});
  j["covariance"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < f.covariance.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < f.covariance.cols(); ++c) row.push_back(f.covariance(r, c));
    j["covariance"].push_back(row);
  }
  if (f.label) j["label"] = *f.label;
  return j;
}

inline StateFile from_state(const GaussianState& rho, std::optional<std::string> label = std::nullopt) {
  return {rho.modes(), rho.mean(), rho.cov(), std::move(label)};
}

inline std::string serialize_state_file(const StateFile& f) { return to_json(f).dump(2) + "\n"; }

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StateFileError(DiagnosticKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline StateFile load_state_file(const std::string& path) { return parse_state_file(read_text_file(path)); }

}  // namespace gaussent::io
