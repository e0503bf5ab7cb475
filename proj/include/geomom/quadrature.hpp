#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "geomom/diffop.hpp"
#include "geomom/sampling.hpp"

namespace geomom {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule by Newton iteration on P_n.
inline GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Spinor supported on a closed parameter rectangle.
struct TestSpinor {
  SpinorField field;
  Interval u;
  Interval v;
};

/// (1-s^2)^4 (1-t^2)^4 on the rectangle, with s, t the affine coordinates
/// mapping it to [-1, 1]^2, times the modulation (m1, m2). The bump vanishes
/// with three derivatives at the edges, so it extends by zero to a C^3 field.
inline TestSpinor make_bump_spinor(Interval su, Interval sv, const Expr& m1, const Expr& m2,
                                   const ParamNames& names = default_param_names()) {
  const Expr u = param(0, names[0]);
  const Expr v = param(1, names[1]);
  const Expr s = (Expr(2.0) * u - Expr(su.lo + su.hi)) / Expr(su.width());
  const Expr t = (Expr(2.0) * v - Expr(sv.lo + sv.hi)) / Expr(sv.width());
  const Expr bump = pow(Expr(1.0) - square(s), Rational(4)) * pow(Expr(1.0) - square(t), Rational(4));
  return {{bump * m1, bump * m2}, su, sv};
}

namespace detail {
inline bool inside_one(const std::vector<Interval>& ivs, const Interval& x) {
  for (const auto& iv : ivs)
    if (iv.lo <= x.lo && x.hi <= iv.hi) return true;
  return false;
}
}  // namespace detail

/// Integral of (phi^dagger (A psi) - (A phi)^dagger psi) sqrt(g) du dv over the
/// common support, by a tensor-product Gauss-Legendre rule. Vanishes (up to
/// quadrature error) iff A is symmetric on such states under the area measure.
inline Complex hermiticity_defect(const DiffOp& a, const Expr& sqrt_g, const TestSpinor& phi,
                                  const TestSpinor& psi, const Domain& domain, const ConstTable& consts,
                                  int nodes = 64) {
  const Interval iu{std::max(phi.u.lo, psi.u.lo), std::min(phi.u.hi, psi.u.hi)};
  const Interval iv{std::max(phi.v.lo, psi.v.lo), std::min(phi.v.hi, psi.v.hi)};
  if (iu.width() <= 0.0 || iv.width() <= 0.0) throw QuadratureError("test spinors have disjoint supports");
  for (const TestSpinor* t : {&phi, &psi})
    if (!detail::inside_one(domain.u, t->u) || !detail::inside_one(domain.v, t->v))
      throw QuadratureError("test-spinor support is not inside the surface domain");

  DerivativeCache cache;
  const SpinorField a_psi = op_apply(a, psi.field, cache);
  const SpinorField a_phi = op_apply(a, phi.field, cache);

  const GaussRule rule = gauss_legendre(nodes);
  const double hu = iu.width() / 2.0;
  const double hv = iv.width() / 2.0;
  const double cu = (iu.lo + iu.hi) / 2.0;
  const double cv = (iv.lo + iv.hi) / 2.0;
  Complex total{};
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) {
      Evaluator ev({cu + hu * rule.nodes[i], cv + hv * rule.nodes[j]}, consts);
      const Complex lhs = std::conj(ev(phi.field.psi1)) * ev(a_psi.psi1) +
                          std::conj(ev(phi.field.psi2)) * ev(a_psi.psi2);
      const Complex rhs = std::conj(ev(a_phi.psi1)) * ev(psi.field.psi1) +
                          std::conj(ev(a_phi.psi2)) * ev(psi.field.psi2);
      total += rule.weights[i] * rule.weights[j] * (lhs - rhs) * ev(sqrt_g);
    }
  }
  return total * hu * hv;
}

}  // namespace geomom
