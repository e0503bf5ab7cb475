#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace geomom {

/// Outcome of one numeric operator-identity check.
struct CheckReport {
  std::string check;
  std::string surface;
  std::string convention;
  std::string gamma;
  double hbar = 1.0;
  double mass = 1.0;
  std::uint64_t seed = 0;
  std::size_t points = 0;
  double tolerance = 0.0;
  double max_residual = 0.0;
  std::map<std::string, double> per_component;
  /// Reported quantities that do not decide pass/fail.
  std::map<std::string, double> observations;
  std::vector<std::string> notes;
  bool pass = false;
};

/// Solved coefficient space of the constant geometric-potential ansatz.
struct NullspaceReport {
  std::string surface;
  std::string convention;
  std::uint64_t seed = 0;
  std::size_t points = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double tolerance = 0.0;
  std::vector<double> singular_values;
  std::size_t dimension = 0;
  std::vector<std::vector<double>> basis;  // orthonormal, (a0, ax, ay, az) coordinates
  std::string span;
  double max_basis_residual = 0.0;
  double hamiltonian_residual = 0.0;       // wedge residual of H alone
  double stability_angle = 0.0;            // largest principal angle between two samples
  bool stable = true;
  std::vector<std::string> warnings;
};

inline nlohmann::ordered_json to_json(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["check"] = r.check;
  j["surface"] = r.surface;
  j["convention"] = r.convention;
  j["gamma"] = r.gamma;
  j["hbar"] = r.hbar;
  j["mass"] = r.mass;
  j["seed"] = r.seed;
  j["points"] = r.points;
  j["tolerance"] = r.tolerance;
  j["max_residual"] = r.max_residual;
  j["per_component"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.per_component) j["per_component"][k] = v;
  if (!r.observations.empty()) {
    j["observations"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.observations) j["observations"][k] = v;
  }
  if (!r.notes.empty()) j["notes"] = r.notes;
  j["pass"] = r.pass;
  return j;
}

inline nlohmann::ordered_json to_json(const NullspaceReport& r) {
  nlohmann::ordered_json j;
  j["check"] = "solve-vg";
  j["surface"] = r.surface;
  j["convention"] = r.convention;
  j["seed"] = r.seed;
  j["points"] = r.points;
  j["tolerance"] = r.tolerance;
  j["matrix"] = {{"rows", r.rows}, {"cols", r.cols}};
  j["singular_values"] = r.singular_values;
  j["dimension"] = r.dimension;
  j["basis"] = r.basis;
  j["summary"] = "dimension " + std::to_string(r.dimension) + ": " + r.span;
  j["max_basis_residual"] = r.max_basis_residual;
  j["hamiltonian_residual"] = r.hamiltonian_residual;
  j["stability_angle"] = r.stability_angle;
  j["stable"] = r.stable;
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  return j;
}

namespace detail {
inline void render_text(const nlohmann::ordered_json& j, const std::string& indent, std::ostringstream& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& v = it.value();
    if (v.is_object()) {
      out << indent << it.key() << ":\n";
      render_text(v, indent + "  ", out);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      for (std::size_t k = 0; k < v.size(); ++k) {
        out << indent << it.key() << "[" << k << "]:\n";
        render_text(v[k], indent + "  ", out);
      }
    } else {
      out << indent << it.key() << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
}
}  // namespace detail

/// Text rendering of a JSON report model: same fields, same number formatting.
inline std::string render_text(const nlohmann::ordered_json& j) {
  std::ostringstream out;
  detail::render_text(j, "", out);
  return out.str();
}

}  // namespace geomom
