// Acceptance run: one line per criterion, exit status 1 if any fails.

#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "geomom/cli.hpp"
#include "geomom/geomom.hpp"
#include "oracles.hpp"
#include "random_ops.hpp"

using namespace geomom;
using namespace testkit;

namespace {

constexpr std::size_t kPoints = 100;
constexpr std::size_t kConstraintPoints = 50;
constexpr std::uint64_t kSeed = 42;
constexpr double kAlpha = 1.3;
constexpr double kBeta = 1.1;
const oracle::Physical kPhys{0.8, 1.7};

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

SurfaceGeometry build(const std::string& name, bool physical = false) {
  SurfaceSpec s = catalog_surface(name);
  if (name == "pseudosphere") s.constants["alpha"] = kAlpha;
  if (name == "helicoid") s.constants["beta"] = kBeta;
  PhysicsConfig cfg;
  if (physical) {
    cfg.hbar = kPhys.hbar;
    cfg.mass = kPhys.m;
  }
  return build_geometry(s, cfg);
}

std::vector<ParamPoint> points(const SurfaceGeometry& g, std::size_t n = kPoints) {
  return sample_points(g.spec.domain, n, kSeed);
}

double op_distance(const DiffOp& a, const oracle::Op& b, Evaluator& ev) {
  double worst = 0.0;
  for (const auto& [k, c] : a.terms()) {
    const auto v = evaluate_coeffs(c, ev);
    auto it = b.find({k.du, k.dv});
    for (int q = 0; q < 4; ++q) worst = std::max(worst, std::abs(v[q] - (it == b.end() ? 0.0 : it->second[q])));
  }
  for (const auto& [k, c] : b)
    if (!a.coefficient({k.first, k.second}))
      for (int q = 0; q < 4; ++q) worst = std::max(worst, std::abs(c[q]));
  return worst;
}

oracle::Op as_op(const std::array<oracle::Pauli, 3>& eqs, int i) { return {{{0, 0}, eqs[i]}}; }

Outcome pseudosphere_geometry() {
  const auto g = build("pseudosphere");
  double spin = 0.0, mean = 0.0;
  for (const auto& p : points(g)) {
    Evaluator ev(p, g.constants);
    spin = std::max(spin, std::abs(ev(g.spin[0])));
    spin = std::max(spin, std::abs(std::abs(ev(g.spin[1]).real()) - oracle::pseudosphere::omega_v(p.u)));
    mean = std::max(mean, std::abs(ev(g.mean_curvature) - oracle::pseudosphere::mean_curvature(kAlpha, p.u)));
  }
  return {spin < 1e-10 && mean < 1e-10, "spin " + sci(spin) + ", M " + sci(mean)};
}

Outcome gauge_part() {
  const auto g = build("pseudosphere");
  double worst = 0.0;
  for (const auto& p : points(g)) {
    Evaluator ev(p, g.constants);
    const auto want = oracle::pseudosphere::gauge_part(kAlpha, p.v);
    for (int i = 0; i < 3; ++i) {
      const auto u = evaluate_coeffs(g.reciprocal()[0][i] * g.omega[0], ev);
      const auto v = evaluate_coeffs(g.reciprocal()[1][i] * g.omega[1], ev);
      for (int q = 0; q < 4; ++q) {
        worst = std::max(worst, std::abs(u[q]));
        worst = std::max(worst, std::abs(v[q] - (q == 3 ? want[i] : 0.0)));
      }
    }
  }
  return {worst < 1e-10, "max " + sci(worst)};
}

Outcome momentum() {
  const auto ps = build("pseudosphere", true);
  const auto he = build("helicoid", true);
  const auto pp = covariant_momentum(ps);
  const auto ph = covariant_momentum(he);
  double a = 0.0, b = 0.0;
  for (const auto& p : points(ps)) {
    Evaluator ev(p, ps.constants);
    const auto o = oracle::pseudosphere::momentum(kAlpha, p.u, p.v, kPhys);
    for (int i = 0; i < 3; ++i) a = std::max(a, op_distance(pp[i], o[i], ev));
  }
  for (const auto& p : points(he)) {
    Evaluator ev(p, he.constants);
    const auto o = oracle::helicoid::momentum(kBeta, p.u, p.v, kPhys);
    for (int i = 0; i < 3; ++i) b = std::max(b, op_distance(ph[i], o[i], ev));
  }
  return {a < 1e-10 && b < 1e-10, "pseudosphere " + sci(a) + ", helicoid " + sci(b)};
}

Outcome hamiltonian() {
  const auto ps = build("pseudosphere", true);
  const auto he = build("helicoid", true);
  const auto hp = dirac_hamiltonian(ps);
  const auto hh = dirac_hamiltonian(he);
  double a = 0.0, b = 0.0;
  for (const auto& p : points(ps)) {
    Evaluator ev(p, ps.constants);
    a = std::max(a, op_distance(hp, oracle::pseudosphere::hamiltonian(kAlpha, p.u, p.v, kPhys), ev));
  }
  for (const auto& p : points(he)) {
    Evaluator ev(p, he.constants);
    b = std::max(b, op_distance(hh, oracle::helicoid::hamiltonian(kBeta, p.u, p.v, kPhys), ev));
  }
  return {a < 1e-10 && b < 1e-10, "pseudosphere " + sci(a) + ", helicoid " + sci(b)};
}

Outcome constraint_equations() {
  Outcome out;
  for (const std::string name : {"pseudosphere", "helicoid"}) {
    const auto g = build(name, true);
    DerivativeCache cache;
    const auto w = generator_wedges(g, cache);
    std::string row = name + " [";
    for (int gen = 0; gen < 4; ++gen) {
      std::array<double, 4> c{};
      c[gen] = 1.0;
      double worst = 0.0;
      for (const auto& p : points(g, kConstraintPoints)) {
        Evaluator ev(p, g.constants);
        const auto eqs = name == "pseudosphere" ? oracle::pseudosphere::constraint(kAlpha, p.u, p.v, kPhys, c)
                                                : oracle::helicoid::constraint(kBeta, p.u, p.v, kPhys, c);
        for (int i = 0; i < 3; ++i) worst = std::max(worst, op_distance(w[gen][i], as_op(eqs, i), ev));
      }
      out.pass = out.pass && worst < 1e-8;
      row += std::string(gen ? " " : "") + pauli_label(gen) + " " + sci(worst);
    }
    out.detail += (out.detail.empty() ? "" : "; ") + row + "]";
  }
  return out;
}

Outcome potential_solve() {
  Outcome out;
  const std::vector<Eigen::Vector4d> expected{Eigen::Vector4d(1, 0, 0, 0), Eigen::Vector4d(0, 0, 0, 1)};
  for (const std::string name : {"pseudosphere", "helicoid", "plane"}) {
    const auto r = vg_nullspace_solve(build(name), {kSeed, kDefaultSamples});
    std::vector<Eigen::Vector4d> basis;
    for (const auto& b : r.basis) basis.emplace_back(b[0], b[1], b[2], b[3]);
    const std::size_t want = name == "plane" ? 4 : 2;
    bool ok = r.dimension == want && r.stable;
    std::string row = name + " dim " + std::to_string(r.dimension);
    if (want == 2) {
      const double angle = principal_angle(basis, expected);
      ok = ok && angle < 1e-6;
      row += " angle " + sci(angle);
    }
    out.pass = out.pass && ok;
    out.detail += (out.detail.empty() ? "" : ", ") + row;
  }
  return out;
}

Outcome identities() {
  Outcome out;
  double worst = 0.0;
  const SampleSpec s{kSeed, kDefaultSamples};
  for (const auto& name : catalog_names()) {
    const auto g = build(name);
    for (const auto& r : {fcc_check(g, s, 1e-8), tangency_check(g, s, 1e-8), pp_commutator_check(g, s, 1e-8)}) {
      worst = std::max(worst, r.max_residual);
      if (!r.pass) {
        out.pass = false;
        out.detail += name + " " + r.check + " failed; ";
      }
    }
  }
  double control = std::numeric_limits<double>::infinity();
  for (const std::string name : {"cylinder", "sphere", "torus", "pseudosphere"})
    control = std::min(control, tangency_check(build(name), s, 1e-8, false).max_residual);
  out.pass = out.pass && control > 0.1;
  out.detail += "max " + sci(worst) + ", control min " + sci(control);
  return out;
}

Outcome hermiticity() {
  double worst = 0.0;
  for (const auto& name : catalog_names()) {
    const auto g = build(name);
    const auto p = covariant_momentum(g);
    for (int i = 0; i < 3; ++i) worst = std::max(worst, hermiticity_defect(g, p[i]));
    worst = std::max(worst, hermiticity_defect(g, dirac_hamiltonian(g)));
  }
  return {worst < 1e-6, "max " + sci(worst)};
}

Outcome oracle_equivalences() {
  const Domain box{{{0.3, 1.1}}, {{0.2, 1.0}}};
  const ConstTable none;
  RandomOps r(kSeed);

  double compose = 0.0;
  const auto cpts = sample_points(box, 5, kSeed);
  for (int n = 0; n < 20; ++n) {
    const DiffOp a = r.op(2);
    const DiffOp b = r.op(2);
    const SpinorField psi = r.spinor();
    DerivativeCache cache;
    const SpinorField lhs = op_apply(op_compose(a, b, cache), psi, cache);
    const SpinorField rhs = op_apply(a, op_apply(b, psi, cache), cache);
    for (const auto& p : cpts) {
      Evaluator ev(p, none);
      for (auto [x, y] : {std::pair{lhs.psi1, rhs.psi1}, std::pair{lhs.psi2, rhs.psi2}}) {
        const Complex want = ev(y);
        compose = std::max(compose, std::abs(ev(x) - want) / std::max(1.0, std::abs(want)));
      }
    }
  }

  double fd = 0.0;
  int cases = 0;
  const ConstTable consts{{"a", 1.3}, {"b", 0.7}};
  const Domain fbox{{{0.2, 1.2}}, {{0.2, 1.2}}};
  const double h = 1e-5;
  for (const auto& c : oracle::corpus()) {
    const Expr e = parse(c.source);
    const Expr du = differentiate(e, 0);
    const Expr dv = differentiate(e, 1);
    for (const auto& p : sample_points(fbox, 10, kSeed)) {
      const double fu = (c.f(p.u + h, p.v) - c.f(p.u - h, p.v)) / (2 * h);
      const double fv = (c.f(p.u, p.v + h) - c.f(p.u, p.v - h)) / (2 * h);
      fd = std::max(fd, std::abs(evaluate(du, p, consts) - fu) / std::max(1.0, std::abs(fu)));
      fd = std::max(fd, std::abs(evaluate(dv, p, consts) - fv) / std::max(1.0, std::abs(fv)));
      ++cases;
    }
  }

  double pauli = 0.0;
  const auto ppts = sample_points(box, 100, kSeed);
  for (int n = 0; n < 100; ++n) {
    const CMat a = r.matrix();
    const CMat b = r.matrix();
    Evaluator ev(ppts[n], none);
    const Dense want = dense_mul(evaluate_dense(a, ev), evaluate_dense(b, ev));
    const Dense got = evaluate_dense(mat_mul(a, b), ev);
    for (int k = 0; k < 4; ++k) pauli = std::max(pauli, std::abs(got[k] - want[k]));
  }
  return {compose < 1e-8 && fd < 1e-6 && cases == 200 && pauli < 1e-12,
          "compose " + sci(compose) + ", derivative " + sci(fd) + " (" + std::to_string(cases) + " cases), pauli " +
              sci(pauli)};
}

std::string check_suite_json() {
  std::string all;
  for (const auto& name : catalog_names()) {
    const std::vector<std::string> args{"geomom", "--json", "--seed", std::to_string(kSeed), "check", name};
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    all += out.str();
  }
  return all;
}

Outcome determinism() {
  const std::string a = check_suite_json();
  const std::string b = check_suite_json();
  return {!a.empty() && a == b, std::to_string(a.size()) + " bytes"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"pseudosphere spin connection and mean curvature", pseudosphere_geometry},
      {"pseudosphere gauge parts", gauge_part},
      {"momentum components", momentum},
      {"expanded Hamiltonians", hamiltonian},
      {"constraint equations per generator", constraint_equations},
      {"constant potential nullspace", potential_solve},
      {"operator identities and negative control", identities},
      {"Hermiticity by quadrature", hermiticity},
      {"oracle equivalences", oracle_equivalences},
      {"determinism of check reports", determinism},
  };
  int failed = 0;
  int id = 1;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id++, c.name, o.detail.c_str());
  }
  std::printf("%d of %d criteria passed\n", 10 - failed, 10);
  return failed ? 1 : 0;
}
