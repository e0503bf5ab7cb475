#pragma once

// Command-line front end. run_cli() is the whole program; main() only
// forwards argv, so tests can drive it with in-memory streams.
//
// Exit status: 0 pass, 1 check failed, 2 usage or input error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geomom/geometry.hpp"
#include "geomom/nullspace.hpp"
#include "geomom/quantize.hpp"
#include "geomom/report.hpp"
#include "geomom/surface.hpp"

namespace geomom {
namespace cli {

using ojson = nlohmann::ordered_json;

inline constexpr int kExitPass = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr std::size_t kDefaultTableRows = 5;

/// Input problem detected before or during a run (bad file, bad flag value).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string surface;
  std::uint64_t seed = 42;
  std::optional<std::size_t> samples;
  std::optional<double> tol;
  double hbar = 1.0;
  double mass = 1.0;
  std::string gamma_rep = "sigma_x,sigma_y,-sigma_z";
  std::string convention = "default";
  bool json = false;
  std::string output;
  std::string vg;
};

/// Catalog name, else a path to a JSON spec.
inline SurfaceSpec resolve_surface(const std::string& selector) {
  for (const auto& n : catalog_names())
    if (n == selector) return catalog_surface(n);
  if (std::filesystem::exists(selector)) return load_surface_file(selector);
  throw InputError("unknown surface '" + selector + "' (not a catalog name or existing file)");
}

inline PhysicsConfig physics(const RunConfig& rc) {
  PhysicsConfig cfg;
  cfg.hbar = rc.hbar;
  cfg.mass = rc.mass;
  try {
    cfg.gamma = GammaRep::parse(rc.gamma_rep);
    cfg.convention = Convention::parse(rc.convention);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return cfg;
}

inline ojson complex_json(Complex z) { return ojson::array({z.real(), z.imag()}); }

inline ojson cmat_json(const CMat& m, Evaluator& ev) {
  const auto c = evaluate_coeffs(m, ev);
  ojson j = ojson::object();
  for (int k = 0; k < 4; ++k) j[pauli_label(k)] = complex_json(c[k]);
  return j;
}

inline std::string term_label(MultiIndex k) {
  if (k.order() == 0) return "1";
  std::string s;
  auto part = [&](const char* name, int n) {
    if (n == 0) return;
    if (!s.empty()) s += " ";
    s += name;
    if (n > 1) s += "^" + std::to_string(n);
  };
  part("du", k.du);
  part("dv", k.dv);
  return s;
}

inline ojson op_json(const DiffOp& a, Evaluator& ev) {
  ojson j = ojson::object();
  for (const auto& [k, c] : a.terms()) j[term_label(k)] = cmat_json(c, ev);
  return j;
}

inline ojson header(const SurfaceGeometry& g, const std::string& command) {
  ojson j;
  j["command"] = command;
  j["surface"] = g.spec.name;
  j["parameters"] = {g.spec.params[0], g.spec.params[1]};
  j["constants"] = ojson::object();
  for (const auto& [k, v] : g.spec.constants) j["constants"][k] = v;
  j["hbar"] = g.config.hbar;
  j["mass"] = g.config.mass;
  j["convention"] = g.config.convention.to_string();
  j["gamma"] = g.config.gamma.to_string();
  return j;
}

inline std::vector<ParamPoint> table_points(const SurfaceGeometry& g, const RunConfig& rc) {
  return sample_points(g.spec.domain, rc.samples.value_or(kDefaultTableRows), rc.seed);
}

// ---------------------------------------------------------------------------

inline ojson cmd_geometry(const SurfaceGeometry& g, const RunConfig& rc) {
  ojson j = header(g, "geometry");
  const char* p[] = {"u", "v"};
  j["orthogonal"] = g.orthogonal;
  ojson metric, inverse, second;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const std::string key = std::string("g_") + p[a] + p[b];
      metric[key] = to_string(g.first.metric[a][b]);
      inverse[std::string("g^") + p[a] + p[b]] = to_string(g.first.inverse[a][b]);
      second[std::string("b_") + p[a] + p[b]] = to_string(g.second[a][b]);
    }
  j["metric"] = metric;
  j["inverse_metric"] = inverse;
  j["normal"] = {to_string(g.normal[0]), to_string(g.normal[1]), to_string(g.normal[2])};
  j["second_form"] = second;
  j["mean_curvature"] = to_string(g.mean_curvature);
  j["gaussian_curvature"] = to_string(gaussian_curvature(g));
  ojson frame, inv_frame;
  for (int a = 0; a < 2; ++a)
    for (int m = 0; m < 2; ++m) {
      frame["e" + std::to_string(a + 1) + "_" + p[m]] = to_string(g.frame.legs[a][m]);
      inv_frame[std::string("e^") + p[m] + std::to_string(a + 1)] = to_string(g.frame.inverse[m][a]);
    }
  j["dreibein"] = frame;
  j["inverse_dreibein"] = inv_frame;
  j["spin_connection"] = {{"u", to_string(g.spin[0])}, {"v", to_string(g.spin[1])}};
  j["gauge_field"] = {{"u", to_string(g.omega[0])}, {"v", to_string(g.omega[1])}};
  j["gauge_potential"] = {to_string(g.potential[0]), to_string(g.potential[1]), to_string(g.potential[2])};

  ojson rows = ojson::array();
  for (const auto& pt : table_points(g, rc)) {
    Evaluator ev(pt, g.constants);
    ojson r;
    r["u"] = pt.u;
    r["v"] = pt.v;
    r["metric"] = {ev(g.first.metric[0][0]).real(), ev(g.first.metric[0][1]).real(), ev(g.first.metric[1][1]).real()};
    r["normal"] = {ev(g.normal[0]).real(), ev(g.normal[1]).real(), ev(g.normal[2]).real()};
    r["mean_curvature"] = ev(g.mean_curvature).real();
    r["inverse_dreibein"] = {ev(g.frame.inverse[0][0]).real(), ev(g.frame.inverse[0][1]).real(),
                             ev(g.frame.inverse[1][0]).real(), ev(g.frame.inverse[1][1]).real()};
    r["spin_connection"] = {ev(g.spin[0]).real(), ev(g.spin[1]).real()};
    r["gauge_field"] = {{"u", cmat_json(g.omega[0], ev)}, {"v", cmat_json(g.omega[1], ev)}};
    r["gauge_potential"] = {cmat_json(g.potential[0], ev), cmat_json(g.potential[1], ev),
                            cmat_json(g.potential[2], ev)};
    rows.push_back(r);
  }
  j["samples"] = rows;
  return j;
}

inline ojson cmd_momentum(const SurfaceGeometry& g, const RunConfig& rc) {
  ojson j = header(g, "momentum");
  const OpVec pi = geometric_momentum(g);
  const OpVec p = covariant_momentum(g);
  for (int i = 0; i < 3; ++i) j["geometric_momentum"][axis_name(i)] = to_string(pi[i]);
  for (int i = 0; i < 3; ++i) j["covariant_momentum"][axis_name(i)] = to_string(p[i]);
  ojson rows = ojson::array();
  for (const auto& pt : table_points(g, rc)) {
    Evaluator ev(pt, g.constants);
    ojson r;
    r["u"] = pt.u;
    r["v"] = pt.v;
    for (int i = 0; i < 3; ++i) r[std::string("p_") + axis_name(i)] = op_json(p[i], ev);
    rows.push_back(r);
  }
  j["samples"] = rows;
  return j;
}

inline std::optional<VGAnsatz> potential(const SurfaceGeometry& g, const RunConfig& rc) {
  if (rc.vg.empty()) return std::nullopt;
  try {
    return parse_vg(rc.vg, g.spec.params);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

inline ojson cmd_hamiltonian(const SurfaceGeometry& g, const RunConfig& rc) {
  ojson j = header(g, "hamiltonian");
  const auto vg = potential(g, rc);
  if (vg) j["potential"] = to_string(vg->matrix());
  const DiffOp h = dirac_hamiltonian(g, vg);
  j["hamiltonian"] = to_string(h);
  ojson rows = ojson::array();
  for (const auto& pt : table_points(g, rc)) {
    Evaluator ev(pt, g.constants);
    ojson r;
    r["u"] = pt.u;
    r["v"] = pt.v;
    r["H"] = op_json(h, ev);
    rows.push_back(r);
  }
  j["samples"] = rows;
  return j;
}

struct CheckSelection {
  bool fcc = false;
  bool tangency = false;
  bool ppc = false;
  bool dqc = false;
  bool all = false;
};

inline ojson cmd_check(const SurfaceGeometry& g, const RunConfig& rc, CheckSelection sel, std::vector<std::string>& failed) {
  if (sel.all || !(sel.fcc || sel.tangency || sel.ppc || sel.dqc)) sel.fcc = sel.tangency = sel.ppc = sel.dqc = true;
  const SampleSpec s{rc.seed, rc.samples.value_or(kDefaultSamples)};
  std::vector<CheckReport> reports;
  if (sel.fcc) reports.push_back(fcc_check(g, s, rc.tol.value_or(kFccTolerance)));
  if (sel.tangency) reports.push_back(tangency_check(g, s, rc.tol.value_or(kTangencyTolerance)));
  if (sel.ppc) reports.push_back(pp_commutator_check(g, s, rc.tol.value_or(kPpTolerance)));
  if (sel.dqc) reports.push_back(dqc_residual(g, potential(g, rc), s, rc.tol.value_or(kDqcTolerance)));
  ojson j;
  j["surface"] = g.spec.name;
  ojson arr = ojson::array();
  for (const auto& r : reports) {
    arr.push_back(to_json(r));
    if (!r.pass) failed.push_back(r.check);
  }
  j["pass"] = failed.empty();
  j["failed"] = failed;
  j["reports"] = arr;
  return j;
}

inline ojson cmd_solve_vg(const SurfaceGeometry& g, const RunConfig& rc) {
  const SampleSpec s{rc.seed, rc.samples.value_or(kDefaultSamples)};
  return to_json(vg_nullspace_solve(g, s, rc.tol.value_or(kNullspaceTolerance)));
}

inline DiffOp named_operator(const SurfaceGeometry& g, const std::string& name) {
  for (int i = 0; i < 3; ++i) {
    const std::string a = axis_name(i);
    if (name == a) return position_ops(g)[i];
    if (name == "n_" + a) return normal_ops(g)[i];
    if (name == "p_" + a) return covariant_momentum(g)[i];
    if (name == "Pi_" + a) return geometric_momentum(g)[i];
  }
  if (name == "H") return dirac_hamiltonian(g);
  throw InputError("unknown operator '" + name + "' (x, y, z, n_x.., Pi_x.., p_x.., H)");
}

inline SpinorField load_spinor(const std::string& path, const ParamNames& names) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open spinor file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    return {parse(j.at("psi1").get<std::string>(), names), parse(j.at("psi2").get<std::string>(), names)};
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what() + " (offset " + std::to_string(e.offset()) + ")");
  }
}

inline ojson cmd_apply(const SurfaceGeometry& g, const RunConfig& rc, const std::string& op_name,
                       const std::string& spinor_path) {
  const DiffOp a = named_operator(g, op_name);
  const SpinorField psi = load_spinor(spinor_path, g.spec.params);
  DerivativeCache cache;
  const SpinorField out = op_apply(a, psi, cache);
  ojson j = header(g, "apply");
  j["operator"] = op_name;
  j["input"] = {{"psi1", to_string(psi.psi1)}, {"psi2", to_string(psi.psi2)}};
  j["result"] = {{"psi1", to_string(out.psi1)}, {"psi2", to_string(out.psi2)}};
  ojson rows = ojson::array();
  for (const auto& pt : table_points(g, rc)) {
    Evaluator ev(pt, g.constants);
    rows.push_back({{"u", pt.u}, {"v", pt.v}, {"psi1", complex_json(ev(out.psi1))}, {"psi2", complex_json(ev(out.psi2))}});
  }
  j["samples"] = rows;
  return j;
}

// ---------------------------------------------------------------------------

inline void write_out(const std::string& text, const RunConfig& rc, std::ostream& out) {
  if (rc.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(rc.output, std::ios::binary);
  if (!f) throw InputError("cannot write '" + rc.output + "'");
  f << text;
}

inline void emit(const ojson& j, const RunConfig& rc, std::ostream& out) {
  write_out(rc.json ? j.dump(2) + "\n" : render_text(j), rc, out);
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Geometric momentum and Dirac operators on parametric surfaces", "geomom"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig rc;
  app.add_option("--seed", rc.seed, "Sampling seed")->capture_default_str();
  app.add_option("--samples", rc.samples, "Sample points (checks default 60, tables 5)")->check(CLI::PositiveNumber);
  app.add_option("--tol", rc.tol, "Tolerance override");
  app.add_option("--hbar", rc.hbar, "Planck constant")->capture_default_str();
  app.add_option("--mass", rc.mass, "Mass m = m0 c")->capture_default_str();
  app.add_option("--gamma-rep", rc.gamma_rep, "gamma_1,gamma_2,gamma_0 as Pauli labels")->capture_default_str();
  app.add_option("--convention", rc.convention, "Signs s_M,s_w,s_A or 'default'")->capture_default_str();
  app.add_flag("--json", rc.json, "JSON output");
  app.add_option("--output", rc.output, "Write to file instead of standard output");

  auto* surfaces = app.add_subcommand("surfaces", "Catalog surfaces");
  surfaces->require_subcommand(1);
  surfaces->add_subcommand("list", "List catalog surfaces");
  auto* exp = surfaces->add_subcommand("export", "Write a catalog surface as a JSON spec");
  std::string export_name;
  exp->add_option("name", export_name, "Catalog name")->required();

  auto with_surface = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("surface", rc.surface, "Catalog name or spec file")->required();
    return c;
  };
  auto* geometry = with_surface("geometry", "Geometric fields");
  auto* momentum = with_surface("momentum", "Geometric and covariant momentum");
  auto* hamiltonian = with_surface("hamiltonian", "Dirac Hamiltonian");
  hamiltonian->add_option("--vg", rc.vg, "Potential, e.g. \"sigma_z\" or \"2*I + u*sigma_x\"");
  auto* check = with_surface("check", "Operator identity checks");
  CheckSelection sel;
  check->add_flag("--fcc", sel.fcc, "[x_i, p_j] conditions");
  check->add_flag("--tangency", sel.tangency, "n.p + p.n = 0");
  check->add_flag("--ppc", sel.ppc, "[p_i, p_j] relation");
  check->add_flag("--dqc", sel.dqc, "Wedge (no tangential force) condition");
  check->add_flag("--all", sel.all, "All checks (default)");
  check->add_option("--vg", rc.vg, "Potential added to H for --dqc");
  auto* solve = with_surface("solve-vg", "Constant potentials satisfying the wedge condition");
  auto* apply = with_surface("apply", "Apply an operator to a spinor file");
  std::string op_name;
  std::string spinor_path;
  apply->add_option("--op", op_name, "x, y, z, n_x.., Pi_x.., p_x.., H")->required();
  apply->add_option("--spinor", spinor_path, "JSON {\"psi1\": expr, \"psi2\": expr}")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (surfaces->parsed()) {
      if (surfaces->get_subcommand("list")->parsed()) {
        ojson j;
        j["surfaces"] = ojson::array();
        for (const auto& n : catalog_names()) {
          const auto s = catalog_surface(n);
          j["surfaces"].push_back({{"name", n},
                                   {"embedding", {s.embedding_source[0], s.embedding_source[1], s.embedding_source[2]}}});
        }
        if (rc.json) {
          emit(j, rc, out);
        } else {
          std::string text;
          for (const auto& n : catalog_names()) text += n + "\n";
          write_out(text, rc, out);
        }
      } else {
        write_out(to_json(catalog_surface(export_name)).dump(2) + "\n", rc, out);
      }
      return kExitPass;
    }

    const SurfaceGeometry g = build_geometry(resolve_surface(rc.surface), physics(rc));
    if (geometry->parsed()) emit(cmd_geometry(g, rc), rc, out);
    if (momentum->parsed()) emit(cmd_momentum(g, rc), rc, out);
    if (hamiltonian->parsed()) emit(cmd_hamiltonian(g, rc), rc, out);
    if (solve->parsed()) emit(cmd_solve_vg(g, rc), rc, out);
    if (apply->parsed()) emit(cmd_apply(g, rc, op_name, spinor_path), rc, out);
    if (check->parsed()) {
      std::vector<std::string> failed;
      emit(cmd_check(g, rc, sel, failed), rc, out);
      for (const auto& f : failed) err << "check failed: " << f << "\n";
      return failed.empty() ? kExitPass : kExitFailed;
    }
    return kExitPass;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const SpecError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const GeometryError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const EvalError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const OperatorError& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace cli
}  // namespace geomom
