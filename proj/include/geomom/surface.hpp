#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "geomom/parser.hpp"
#include "geomom/sampling.hpp"

namespace geomom {

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parametric surface r(u, v) = (x, y, z) on a parameter domain.
struct SurfaceSpec {
  std::string name;
  ParamNames params = default_param_names();
  Domain domain;
  ConstTable constants;
  std::array<std::string, 3> embedding_source;
  std::array<Expr, 3> embedding;
  /// Parameter slot attached to frame leg 1 and leg 2.
  std::array<int, 2> frame_order{0, 1};
  std::vector<std::string> singular_notes;
};

/// Names the engine binds itself; surface constants must not shadow them.
inline bool is_reserved_constant(const std::string& n) { return n == "hbar" || n == "m" || n == "i" || n == "pi"; }

inline SurfaceSpec make_surface(std::string name, std::array<std::string, 3> embedding, Domain domain,
                                ConstTable constants = {}, ParamNames params = default_param_names(),
                                std::array<int, 2> frame_order = {0, 1},
                                std::vector<std::string> notes = {}) {
  SurfaceSpec s;
  s.name = std::move(name);
  s.params = std::move(params);
  s.domain = std::move(domain);
  s.constants = std::move(constants);
  s.embedding_source = embedding;
  s.frame_order = frame_order;
  s.singular_notes = std::move(notes);
  if (s.params[0] == s.params[1]) throw SpecError("parameter names must differ");
  for (const auto& [k, v] : s.constants) {
    if (is_reserved_constant(k)) throw SpecError("constant name '" + k + "' is reserved");
    if (k == s.params[0] || k == s.params[1]) throw SpecError("constant '" + k + "' shadows a parameter");
  }
  if ((frame_order[0] != 0 || frame_order[1] != 1) && (frame_order[0] != 1 || frame_order[1] != 0))
    throw SpecError("frame order must be a permutation of the parameters");
  for (int k = 0; k < 3; ++k) {
    try {
      s.embedding[k] = parse(embedding[k], s.params);
    } catch (const ParseError& e) {
      throw SpecError("embedding component " + std::to_string(k) + ": " + e.what());
    }
  }
  for (int ax = 0; ax < 2; ++ax) {
    const auto& ivs = s.domain.axis(ax);
    if (ivs.empty()) throw SpecError("empty domain for parameter '" + s.params[ax] + "'");
    for (const auto& iv : ivs)
      if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
        throw SpecError("bad interval for parameter '" + s.params[ax] + "'");
  }
  return s;
}

// ---------------------------------------------------------------------------
// JSON surface-spec format:
// {"name", "parameters": ["u","v"], "domain": {"u":[a,b], "v":[a,b]},
//  "constants": {...}, "embedding": ["expr","expr","expr"]}
// Optional: "domain" entries may be lists of intervals; "frame_order";
// "singular".

inline nlohmann::json to_json(const SurfaceSpec& s) {
  using nlohmann::json;
  auto axis = [](const std::vector<Interval>& ivs) {
    if (ivs.size() == 1) return json::array({ivs[0].lo, ivs[0].hi});
    json a = json::array();
    for (const auto& iv : ivs) a.push_back(json::array({iv.lo, iv.hi}));
    return a;
  };
  json j;
  j["name"] = s.name;
  j["parameters"] = {s.params[0], s.params[1]};
  j["domain"] = {{s.params[0], axis(s.domain.u)}, {s.params[1], axis(s.domain.v)}};
  j["constants"] = json::object();
  for (const auto& [k, v] : s.constants) j["constants"][k] = v;
  j["embedding"] = {s.embedding_source[0], s.embedding_source[1], s.embedding_source[2]};
  j["frame_order"] = {s.params[s.frame_order[0]], s.params[s.frame_order[1]]};
  if (!s.singular_notes.empty()) j["singular"] = s.singular_notes;
  return j;
}

inline SurfaceSpec surface_from_json(const nlohmann::json& j) {
  try {
    ParamNames params = default_param_names();
    if (j.contains("parameters")) {
      const auto& p = j.at("parameters");
      if (!p.is_array() || p.size() != 2) throw SpecError("\"parameters\" must list two names");
      params = {p[0].get<std::string>(), p[1].get<std::string>()};
    }
    auto axis = [&](const nlohmann::json& a, const std::string& name) {
      std::vector<Interval> ivs;
      if (!a.is_array() || a.empty()) throw SpecError("domain of '" + name + "' must be an array");
      if (a[0].is_number()) {
        if (a.size() != 2) throw SpecError("domain of '" + name + "' must be [lo, hi]");
        ivs.push_back({a[0].get<double>(), a[1].get<double>()});
      } else {
        for (const auto& iv : a) {
          if (!iv.is_array() || iv.size() != 2) throw SpecError("domain of '" + name + "' must hold [lo, hi] pairs");
          ivs.push_back({iv[0].get<double>(), iv[1].get<double>()});
        }
      }
      return ivs;
    };
    const auto& dom = j.at("domain");
    Domain d{axis(dom.at(params[0]), params[0]), axis(dom.at(params[1]), params[1])};
    ConstTable consts;
    if (j.contains("constants"))
      for (const auto& [k, v] : j.at("constants").items()) consts[k] = v.get<double>();
    const auto& emb = j.at("embedding");
    if (!emb.is_array() || emb.size() != 3) throw SpecError("\"embedding\" must hold three expressions");
    std::array<int, 2> order{0, 1};
    if (j.contains("frame_order")) {
      const auto& fo = j.at("frame_order");
      if (!fo.is_array() || fo.size() != 2) throw SpecError("\"frame_order\" must list two parameters");
      for (int a = 0; a < 2; ++a) {
        const auto n = fo[a].get<std::string>();
        if (n == params[0]) {
          order[a] = 0;
        } else if (n == params[1]) {
          order[a] = 1;
        } else {
          throw SpecError("\"frame_order\" names unknown parameter '" + n + "'");
        }
      }
    }
    std::vector<std::string> notes;
    if (j.contains("singular")) notes = j.at("singular").get<std::vector<std::string>>();
    return make_surface(j.at("name").get<std::string>(),
                        {emb[0].get<std::string>(), emb[1].get<std::string>(), emb[2].get<std::string>()},
                        std::move(d), std::move(consts), params, order, std::move(notes));
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("surface spec: ") + e.what());
  }
}

inline SurfaceSpec load_surface_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open surface spec '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecError(path + ": " + e.what());
  }
  return surface_from_json(j);
}

// ---------------------------------------------------------------------------
// Built-in catalog.

inline std::vector<std::string> catalog_names() {
  return {"plane", "cylinder", "sphere", "torus", "catenoid", "pseudosphere", "helicoid"};
}

inline SurfaceSpec catalog_surface(const std::string& name) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (name == "plane") return make_surface("plane", {"u", "v", "0"}, {{{-1.0, 1.0}}, {{-1.0, 1.0}}});
  if (name == "cylinder")
    return make_surface("cylinder", {"R*cos(u)", "R*sin(u)", "v"}, {{{0.0, two_pi}}, {{-1.0, 1.0}}}, {{"R", 1.0}});
  if (name == "sphere")
    return make_surface("sphere", {"R*sin(u)*cos(v)", "R*sin(u)*sin(v)", "R*cos(u)"},
                        {{{0.2, std::numbers::pi - 0.2}}, {{0.0, two_pi}}}, {{"R", 1.0}}, default_param_names(),
                        {0, 1}, {"u=0 and u=pi (poles)"});
  if (name == "torus")
    return make_surface("torus", {"(R+a*cos(u))*cos(v)", "(R+a*cos(u))*sin(v)", "a*sin(u)"},
                        {{{0.0, two_pi}}, {{0.0, two_pi}}}, {{"R", 2.0}, {"a", 1.0}});
  if (name == "catenoid")
    return make_surface("catenoid",
                        {"c*(exp(u/c)+exp(-u/c))/2*cos(v)", "c*(exp(u/c)+exp(-u/c))/2*sin(v)", "u"},
                        {{{-1.0, 1.0}}, {{0.0, two_pi}}}, {{"c", 1.0}});
  if (name == "pseudosphere")
    return make_surface("pseudosphere",
                        {"alpha*cos(u)*cos(v)", "alpha*cos(u)*sin(v)", "alpha*(ln(sec(u)+tan(u))-sin(u))"},
                        {{{0.15, 1.35}}, {{0.0, two_pi}}}, {{"alpha", 1.0}}, default_param_names(), {1, 0},
                        {"u=0 (tan u = 0, cusp)", "u=pi/2 (sec u pole)"});
  if (name == "helicoid")
    return make_surface("helicoid", {"u*cos(v)", "u*sin(v)", "beta*v"},
                        {{{-3.0, -0.2}, {0.2, 3.0}}, {{0.0, two_pi}}}, {{"beta", 1.0}}, default_param_names(),
                        {0, 1}, {"u=0 (axis, excluded)"});
  throw SpecError("unknown catalog surface '" + name + "'");
}

}  // namespace geomom
