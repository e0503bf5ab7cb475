#pragma once

// Physical operators on a surface (geometric momentum, covariant momentum,
// Dirac Hamiltonian) and the numeric checks run against them.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geomom/diffop.hpp"
#include "geomom/geometry.hpp"
#include "geomom/quadrature.hpp"
#include "geomom/report.hpp"
#include "geomom/sampling.hpp"

namespace geomom {

using OpVec = std::array<DiffOp, 3>;

inline constexpr std::size_t kDefaultSamples = 60;
inline constexpr double kFccTolerance = 1e-9;
inline constexpr double kTangencyTolerance = 1e-9;
inline constexpr double kPpTolerance = 1e-8;
inline constexpr double kDqcTolerance = 1e-8;
inline constexpr double kNullspaceTolerance = 1e-8;

inline const char* axis_name(int i) {
  static const char* n[] = {"x", "y", "z"};
  return n[i];
}

inline Expr hbar_expr() { return constant("hbar"); }
inline Expr mass_expr() { return constant("m"); }

/// Pi_i = -i hbar ((r^u)_i d_u + (r^v)_i d_v + M n_i). Pass
/// include_curvature = false to drop the normal term.
inline OpVec geometric_momentum(const SurfaceGeometry& g, bool include_curvature = true) {
  const Expr mih = Expr(Complex(0.0, -1.0)) * hbar_expr();
  OpVec pi;
  for (int i = 0; i < 3; ++i) {
    DiffOp op;
    op.add_term({1, 0}, CMat::scalar(mih * g.reciprocal()[0][i]));
    op.add_term({0, 1}, CMat::scalar(mih * g.reciprocal()[1][i]));
    if (include_curvature) op.add_term({0, 0}, CMat::scalar(mih * g.mean_curvature * g.normal[i]));
    pi[i] = op;
  }
  return pi;
}

/// p_i = Pi_i + s_A A_i
inline OpVec covariant_momentum(const SurfaceGeometry& g, bool include_curvature = true) {
  OpVec p = geometric_momentum(g, include_curvature);
  const Expr sa(static_cast<double>(g.config.convention.gauge_sign));
  for (int i = 0; i < 3; ++i) p[i] = p[i] + DiffOp::multiplication(sa * g.potential[i]);
  return p;
}

/// Matrix potential a0 I + ax sigma_x + ay sigma_y + az sigma_z.
struct VGAnsatz {
  std::array<Expr, 4> coeff;

  CMat matrix() const { return {coeff[0], coeff[1], coeff[2], coeff[3]}; }

  static VGAnsatz generator(int k) {
    VGAnsatz v;
    v.coeff[k] = Expr(1.0);
    return v;
  }
};

/// Parses a combination such as "2*I + u*sigma_z" (labels I, sigma_x,
/// sigma_y, sigma_z) into its four coefficient expressions.
inline VGAnsatz parse_vg(const std::string& text, const ParamNames& names = default_param_names()) {
  static const std::array<std::string, 4> labels{"I", "sigma_x", "sigma_y", "sigma_z"};
  Expr e;
  try {
    e = parse(text, names);
  } catch (const ParseError& err) {
    throw std::invalid_argument("potential: " + std::string(err.what()));
  }
  VGAnsatz v;
  Expr rest = e;
  for (int k = 0; k < 4; ++k) {
    Expr c = differentiate(e, Symbol::named(labels[k]));
    for (const auto& l : labels)
      if (!differentiate(c, Symbol::named(l)).is_zero())
        throw std::invalid_argument("potential is not linear in the matrix labels: " + text);
    for (const auto& l : labels) c = substitute(c, l, Expr());
    v.coeff[k] = fold_constants(c);
    rest = substitute(rest, labels[k], Expr());
  }
  if (!fold_constants(rest).is_zero())
    throw std::invalid_argument("potential has a term without a matrix label: " + text);
  return v;
}

/// gamma^m = e^{ma} gamma_a
inline std::array<CMat, 2> curved_gammas(const SurfaceGeometry& g) {
  std::array<CMat, 2> out;
  for (int m = 0; m < 2; ++m)
    out[m] = g.frame.inverse[m][0] * g.config.gamma.gamma(0) + g.frame.inverse[m][1] * g.config.gamma.gamma(1);
  return out;
}

/// H = -i hbar gamma^m (d_m + i Omega_m) - gamma_0 m (+ V)
inline DiffOp dirac_hamiltonian(const SurfaceGeometry& g, const std::optional<VGAnsatz>& vg = std::nullopt) {
  const auto gm = curved_gammas(g);
  const Expr mih = Expr(Complex(0.0, -1.0)) * hbar_expr();
  DiffOp h;
  h.add_term({1, 0}, mih * gm[0]);
  h.add_term({0, 1}, mih * gm[1]);
  CMat zero_order = hbar_expr() * (mat_mul(gm[0], g.omega[0]) + mat_mul(gm[1], g.omega[1]));
  zero_order += -(mass_expr() * g.config.gamma.gamma(2));
  if (vg) zero_order += vg->matrix();
  h.add_term({0, 0}, zero_order);
  return h;
}

inline OpVec position_ops(const SurfaceGeometry& g) {
  return {DiffOp::multiplication(g.spec.embedding[0]), DiffOp::multiplication(g.spec.embedding[1]),
          DiffOp::multiplication(g.spec.embedding[2])};
}

inline OpVec normal_ops(const SurfaceGeometry& g) {
  return {DiffOp::multiplication(g.normal[0]), DiffOp::multiplication(g.normal[1]),
          DiffOp::multiplication(g.normal[2])};
}

// ---------------------------------------------------------------------------
// Operator identities. Each returns the residual operators (which vanish when
// the identity holds) keyed by component name.

using NamedOps = std::vector<std::pair<std::string, DiffOp>>;

/// [x_i, p_j] - i hbar (delta_ij - n_i n_j) and [x_i, x_j].
inline NamedOps fcc_residuals(const SurfaceGeometry& g, const OpVec& p, DerivativeCache& cache) {
  const OpVec x = position_ops(g);
  const Expr ih = Expr(Complex(0.0, 1.0)) * hbar_expr();
  NamedOps out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Expr proj = (i == j ? Expr(1.0) : Expr()) - g.normal[i] * g.normal[j];
      out.emplace_back(std::string("[") + axis_name(i) + ",p" + axis_name(j) + "]",
                       op_commutator(x[i], p[j], cache) - DiffOp::multiplication(ih * proj));
    }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      out.emplace_back(std::string("[") + axis_name(i) + "," + axis_name(j) + "]", op_commutator(x[i], x[j], cache));
  return out;
}

/// sum_i (n_i p_i + p_i n_i)
inline DiffOp tangency_operator(const SurfaceGeometry& g, const OpVec& p, DerivativeCache& cache) {
  const OpVec n = normal_ops(g);
  DiffOp t;
  for (int i = 0; i < 3; ++i) t = t + op_compose(n[i], p[i], cache) + op_compose(p[i], n[i], cache);
  return t;
}

/// [p_i, p_j] + (i hbar / 2) sum_k (f_ijk p_k + p_k f_ijk),
/// f_ijk = n_i d_j n_k - n_j d_i n_k with d the surface gradient.
inline NamedOps pp_residuals(const SurfaceGeometry& g, const OpVec& p, DerivativeCache& cache) {
  std::array<Vec3, 3> grad_n;  // grad_n[k][j] = d_j n_k
  for (int k = 0; k < 3; ++k) grad_n[k] = surface_gradient(g, g.normal[k], &cache);
  const Expr half_ih = Expr(Complex(0.0, 0.5)) * hbar_expr();
  NamedOps out;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      DiffOp rhs;
      for (int k = 0; k < 3; ++k) {
        const DiffOp f = DiffOp::multiplication(g.normal[i] * grad_n[k][j] - g.normal[j] * grad_n[k][i]);
        rhs = rhs + op_compose(f, p[k], cache) + op_compose(p[k], f, cache);
      }
      out.emplace_back(std::string("[p") + axis_name(i) + ",p" + axis_name(j) + "]",
                       op_commutator(p[i], p[j], cache) + half_ih * rhs);
    }
  return out;
}

/// eps_ijk (n_j [p_k, X] - [p_j, X] n_k) for i = x, y, z.
inline OpVec wedge_operator(const SurfaceGeometry& g, const OpVec& p, const DiffOp& x, DerivativeCache& cache) {
  const OpVec n = normal_ops(g);
  OpVec c;
  for (int k = 0; k < 3; ++k) c[k] = op_commutator(p[k], x, cache);
  OpVec w;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    w[i] = op_compose(n[j], c[k], cache) - op_compose(c[j], n[k], cache) - op_compose(n[k], c[j], cache) +
           op_compose(c[k], n[j], cache);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Numeric evaluation of residual operators.

struct SampleSpec {
  std::uint64_t seed = 42;
  std::size_t count = kDefaultSamples;
};

inline std::vector<ParamPoint> sample(const SurfaceGeometry& g, const SampleSpec& s) {
  return sample_points(g.spec.domain, s.count, s.seed);
}

/// Residual norms per operator, max over points.
inline std::vector<double> residual_norms(const std::vector<DiffOp>& ops, const std::vector<ParamPoint>& points,
                                          const ConstTable& consts) {
  std::vector<double> worst(ops.size(), 0.0);
  for (const auto& p : points) {
    Evaluator ev(p, consts);
    for (std::size_t k = 0; k < ops.size(); ++k) worst[k] = std::max(worst[k], coefficient_max_norm(ops[k], ev));
  }
  return worst;
}

inline CheckReport make_report(const SurfaceGeometry& g, std::string check, const SampleSpec& s, double tol) {
  CheckReport r;
  r.check = std::move(check);
  r.surface = g.spec.name;
  r.convention = g.config.convention.to_string();
  r.gamma = g.config.gamma.to_string();
  r.hbar = g.config.hbar;
  r.mass = g.config.mass;
  r.seed = s.seed;
  r.points = s.count;
  r.tolerance = tol;
  return r;
}

inline void fill_components(CheckReport& r, const NamedOps& ops, const std::vector<ParamPoint>& pts,
                            const ConstTable& consts) {
  std::vector<DiffOp> bare;
  for (const auto& [name, op] : ops) bare.push_back(op);
  const auto norms = residual_norms(bare, pts, consts);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    r.per_component[ops[k].first] = norms[k];
    r.max_residual = std::max(r.max_residual, norms[k]);
  }
  r.pass = r.max_residual < r.tolerance;
}

inline CheckReport fcc_check(const SurfaceGeometry& g, const SampleSpec& s = {}, double tol = kFccTolerance) {
  DerivativeCache cache;
  CheckReport r = make_report(g, "fcc", s, tol);
  fill_components(r, fcc_residuals(g, covariant_momentum(g), cache), sample(g, s), g.constants);
  return r;
}

inline CheckReport tangency_check(const SurfaceGeometry& g, const SampleSpec& s = {}, double tol = kTangencyTolerance,
                                  bool include_curvature = true) {
  DerivativeCache cache;
  CheckReport r = make_report(g, include_curvature ? "tangency" : "tangency-without-curvature", s, tol);
  fill_components(r, {{"n.p+p.n", tangency_operator(g, covariant_momentum(g, include_curvature), cache)}},
                  sample(g, s), g.constants);
  return r;
}

/// Judged on the geometric momentum Pi; the same identity evaluated with the
/// covariant p is reported under observations.
inline CheckReport pp_commutator_check(const SurfaceGeometry& g, const SampleSpec& s = {}, double tol = kPpTolerance) {
  DerivativeCache cache;
  CheckReport r = make_report(g, "ppc", s, tol);
  const auto pts = sample(g, s);
  fill_components(r, pp_residuals(g, geometric_momentum(g), cache), pts, g.constants);
  std::vector<DiffOp> cov;
  for (auto& [name, op] : pp_residuals(g, covariant_momentum(g), cache)) cov.push_back(op);
  double worst = 0.0;
  for (double x : residual_norms(cov, pts, g.constants)) worst = std::max(worst, x);
  r.observations["covariant_momentum_residual"] = worst;
  return r;
}

inline CheckReport dqc_residual(const SurfaceGeometry& g, const std::optional<VGAnsatz>& vg = std::nullopt,
                                const SampleSpec& s = {}, double tol = kDqcTolerance) {
  DerivativeCache cache;
  CheckReport r = make_report(g, "dqc", s, tol);
  const OpVec w = wedge_operator(g, covariant_momentum(g), dirac_hamiltonian(g, vg), cache);
  fill_components(r, {{"x", w[0]}, {"y", w[1]}, {"z", w[2]}}, sample(g, s), g.constants);
  if (vg) r.notes.push_back("potential: " + to_string(vg->matrix()));
  return r;
}

/// Runs fcc, tangency, ppc and dqc (without potential).
inline std::vector<CheckReport> run_all_checks(const SurfaceGeometry& g, const SampleSpec& s = {}) {
  return {fcc_check(g, s), tangency_check(g, s), pp_commutator_check(g, s), dqc_residual(g, std::nullopt, s)};
}

// ---------------------------------------------------------------------------
// Hermiticity under the area measure, by quadrature on bump spinors.

/// Two overlapping bump spinors inside the first interval of each axis.
inline std::pair<TestSpinor, TestSpinor> hermiticity_probes(const SurfaceGeometry& g) {
  const Interval du = g.spec.domain.u.front();
  const Interval dv = g.spec.domain.v.front();
  auto sub = [](const Interval& iv, double a, double b) {
    return Interval{iv.lo + a * iv.width(), iv.lo + b * iv.width()};
  };
  const Expr u = param(0, g.spec.params[0]);
  const Expr v = param(1, g.spec.params[1]);
  const Expr i(Complex(0.0, 1.0));
  TestSpinor phi = make_bump_spinor(sub(du, 0.1, 0.7), sub(dv, 0.15, 0.75), Expr(1.0) + i * Expr(0.3) * u,
                                    cos(v) - Expr(0.5) * i, g.spec.params);
  TestSpinor psi = make_bump_spinor(sub(du, 0.3, 0.9), sub(dv, 0.25, 0.85), sin(u + v) + Expr(0.2) * i,
                                    Expr(0.7) + i * u * v, g.spec.params);
  return {phi, psi};
}

inline double hermiticity_defect(const SurfaceGeometry& g, const DiffOp& a, int nodes = 48) {
  const auto [phi, psi] = hermiticity_probes(g);
  return std::abs(hermiticity_defect(a, g.sqrt_det, phi, psi, g.spec.domain, g.constants, nodes));
}

}  // namespace geomom
