#pragma once

// Geometric fields of a parametric surface, all as symbolic expressions:
// natural basis, unit normal, both fundamental forms, mean curvature,
// orthonormal frame (dreibein), Christoffel symbols, spin connection, gauge
// field Omega_m and gauge potential A = hbar r^m Omega_m.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "geomom/config.hpp"
#include "geomom/diffop.hpp"
#include "geomom/pauli.hpp"
#include "geomom/sampling.hpp"
#include "geomom/surface.hpp"

namespace geomom {

using Vec3 = std::array<Expr, 3>;
/// m[i][j]; for metric-like fields i, j are parameter slots.
using Mat2 = std::array<std::array<Expr, 2>, 2>;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDegeneracyTolerance = 1e-10;
inline constexpr std::size_t kProbePoints = 32;
inline constexpr std::uint64_t kProbeSeed = 0x5eed5eedULL;

inline Expr dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline Vec3 scale(const Expr& s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

inline Vec3 differentiate(const Vec3& a, int wrt) {
  Differentiator d(Symbol::parameter(wrt));
  return {d(a[0]), d(a[1]), d(a[2])};
}

/// Constants visible to evaluation: the surface's own plus hbar and m.
inline ConstTable evaluation_constants(const SurfaceSpec& s, const PhysicsConfig& cfg) {
  ConstTable c = s.constants;
  c["hbar"] = cfg.hbar;
  c["m"] = cfg.mass;
  return c;
}

inline std::vector<ParamPoint> probe_points(const SurfaceSpec& s) {
  return sample_points(s.domain, kProbePoints, kProbeSeed);
}

/// r_u, r_v: componentwise derivatives of the embedding.
inline std::array<Vec3, 2> natural_basis(const SurfaceSpec& s) {
  return {differentiate(s.embedding, 0), differentiate(s.embedding, 1)};
}

/// n = r_u x r_v / |r_u x r_v| in declared parameter order.
inline Vec3 unit_normal(const std::array<Vec3, 2>& basis, const std::vector<ParamPoint>& points,
                        const ConstTable& consts) {
  const Vec3 c = cross(basis[0], basis[1]);
  const Expr norm2 = dot(c, c);
  for (const auto& p : points) {
    Evaluator ev(p, consts);
    if (std::sqrt(std::abs(ev(norm2))) < kDegeneracyTolerance)
      throw GeometryError("degenerate surface: |r_u x r_v| vanishes at (" + std::to_string(p.u) + "," +
                          std::to_string(p.v) + ")");
  }
  const Expr inv = Expr(1.0) / sqrt(norm2);
  return scale(inv, c);
}

struct FirstForm {
  Mat2 metric;           // g_{mn}
  Mat2 inverse;          // g^{mn}
  Expr determinant;      // det g
  std::array<Vec3, 2> reciprocal;  // r^m = g^{mn} r_n
};

/// g_{mn} = r_m . r_n, its inverse and the reciprocal basis. When
/// `orthogonal`, g_uv is taken as the literal zero.
inline FirstForm first_fundamental(const std::array<Vec3, 2>& basis, bool orthogonal = false) {
  FirstForm f;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) f.metric[i][j] = (orthogonal && i != j) ? Expr() : dot(basis[i], basis[j]);
  f.metric[1][0] = f.metric[0][1];
  const Mat2& g = f.metric;
  f.determinant = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  if (orthogonal) {
    f.inverse = {{{Expr(1.0) / g[0][0], Expr()}, {Expr(), Expr(1.0) / g[1][1]}}};
  } else {
    f.inverse = {{{g[1][1] / f.determinant, neg(g[0][1]) / f.determinant},
                  {neg(g[1][0]) / f.determinant, g[0][0] / f.determinant}}};
  }
  for (int m = 0; m < 2; ++m) f.reciprocal[m] = scale(f.inverse[m][0], basis[0]) + scale(f.inverse[m][1], basis[1]);
  return f;
}

/// b_{mn} = (d_m r_n) . n
inline Mat2 second_fundamental(const std::array<Vec3, 2>& basis, const Vec3& n) {
  Mat2 b;
  for (int m = 0; m < 2; ++m)
    for (int k = 0; k < 2; ++k) b[m][k] = dot(differentiate(basis[k], m), n);
  return b;
}

/// g^{mn} b_{mn}; equals -div n for the unit normal.
inline Expr curvature_trace(const Mat2& ginv, const Mat2& b) {
  Expr t;
  for (int m = 0; m < 2; ++m)
    for (int k = 0; k < 2; ++k) t += ginv[m][k] * b[m][k];
  return t;
}

/// M = s_M * g^{mn} b_{mn} / 2
inline Expr mean_curvature(const Mat2& ginv, const Mat2& b, const Convention& conv = {}) {
  return Expr(0.5 * conv.mean_sign) * curvature_trace(ginv, b);
}

struct Frame {
  Mat2 legs;     // legs[a][m] = e^a_m
  Mat2 inverse;  // inverse[m][a] = e^{m a} = g^{mn} e^a_n
};

/// Orthonormal frame with e^a_m e^a_n = g_{mn}. Leg a is attached to
/// parameter slot order[a]. Orthogonal metrics use the diagonal square root;
/// otherwise the symmetric square root of g (rows permuted by `order`).
inline Frame dreibein(const FirstForm& f, std::array<int, 2> order, bool orthogonal) {
  Frame fr;
  const Mat2& g = f.metric;
  if (orthogonal) {
    for (int a = 0; a < 2; ++a)
      for (int m = 0; m < 2; ++m) fr.legs[a][m] = (m == order[a]) ? sqrt(g[m][m]) : Expr();
  } else {
    const Expr s = sqrt(f.determinant);
    const Expr t = sqrt(g[0][0] + g[1][1] + Expr(2.0) * s);
    Mat2 root;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) root[i][j] = (i == j ? g[i][j] + s : g[i][j]) / t;
    for (int a = 0; a < 2; ++a)
      for (int m = 0; m < 2; ++m) fr.legs[a][m] = root[order[a]][m];
  }
  for (int m = 0; m < 2; ++m)
    for (int a = 0; a < 2; ++a) fr.inverse[m][a] = f.inverse[m][0] * fr.legs[a][0] + f.inverse[m][1] * fr.legs[a][1];
  return fr;
}

/// Gamma[l][m][n] = 1/2 g^{ls} (d_m g_{sn} + d_n g_{sm} - d_s g_{mn})
using Christoffel = std::array<Mat2, 2>;

inline Christoffel christoffel(const FirstForm& f) {
  Differentiator du(Symbol::parameter(0));
  Differentiator dv(Symbol::parameter(1));
  auto d = [&](const Expr& e, int k) { return k == 0 ? du(e) : dv(e); };
  const Mat2& g = f.metric;
  Christoffel gam;
  for (int l = 0; l < 2; ++l)
    for (int m = 0; m < 2; ++m)
      for (int n = 0; n < 2; ++n) {
        Expr acc;
        for (int s = 0; s < 2; ++s) acc += f.inverse[l][s] * (d(g[s][n], m) + d(g[s][m], n) - d(g[m][n], s));
        gam[l][m][n] = Expr(0.5) * acc;
      }
  return gam;
}

/// w_m^{12} = s_w e^1_n (d_m e^{n2} + Gamma^n_{ml} e^{l2}), one entry per parameter.
inline std::array<Expr, 2> spin_connection(const Frame& fr, const Christoffel& gam, const Convention& conv = {}) {
  Differentiator du(Symbol::parameter(0));
  Differentiator dv(Symbol::parameter(1));
  std::array<Expr, 2> w;
  for (int m = 0; m < 2; ++m) {
    Expr acc;
    for (int n = 0; n < 2; ++n) {
      Expr inner = m == 0 ? du(fr.inverse[n][1]) : dv(fr.inverse[n][1]);
      for (int l = 0; l < 2; ++l) inner += gam[n][m][l] * fr.inverse[l][1];
      acc += fr.legs[0][n] * inner;
    }
    w[m] = Expr(static_cast<double>(conv.spin_sign)) * acc;
  }
  return w;
}

/// Omega_m = (i/8) w_m^{ab} [gamma_a, gamma_b] = (i/4) w_m^{12} [gamma_1, gamma_2]
inline std::array<CMat, 2> gauge_field(const std::array<Expr, 2>& w, const GammaRep& gamma) {
  const CMat c = mat_commutator(gamma.gamma(0), gamma.gamma(1));
  const Expr quarter_i(Complex(0.0, 0.25));
  return {(quarter_i * w[0]) * c, (quarter_i * w[1]) * c};
}

/// A_i = hbar sum_m (r^m)_i Omega_m
inline std::array<CMat, 3> gauge_potential(const std::array<Vec3, 2>& reciprocal, const std::array<CMat, 2>& omega,
                                           const Expr& hbar) {
  std::array<CMat, 3> a;
  for (int i = 0; i < 3; ++i) a[i] = hbar * (reciprocal[0][i] * omega[0] + reciprocal[1][i] * omega[1]);
  return a;
}

/// All derived fields of one surface, built once and then read-only.
struct SurfaceGeometry {
  SurfaceSpec spec;
  PhysicsConfig config;
  ConstTable constants;  // evaluation table (surface constants + hbar, m)
  bool orthogonal = false;

  std::array<Vec3, 2> basis;
  Vec3 normal;
  FirstForm first;
  Mat2 second;
  Expr trace;           // g^{mn} b_{mn} = -div n
  Expr mean_curvature;  // s_M * trace / 2
  Expr sqrt_det;        // area density sqrt(det g)
  Frame frame;
  Christoffel gamma;
  std::array<Expr, 2> spin;      // w_u^{12}, w_v^{12}
  std::array<CMat, 2> omega;     // Omega_u, Omega_v
  std::array<CMat, 3> potential; // A

  const Mat2& metric() const { return first.metric; }
  const Mat2& inverse_metric() const { return first.inverse; }
  const std::array<Vec3, 2>& reciprocal() const { return first.reciprocal; }
};

namespace detail {
/// True when `e` is below `rel` times `scale` (both evaluated) at every point.
template <class ScaleFn>
bool vanishes_on(const Expr& e, const std::vector<ParamPoint>& pts, const ConstTable& c, ScaleFn scale,
                 double rel) {
  for (const auto& p : pts) {
    Evaluator ev(p, c);
    if (std::abs(ev(e)) > rel * scale(ev) + 1e-300) return false;
  }
  return true;
}
}  // namespace detail

inline SurfaceGeometry build_geometry(const SurfaceSpec& spec, const PhysicsConfig& cfg = {}) {
  SurfaceGeometry g;
  g.spec = spec;
  g.config = cfg;
  g.constants = evaluation_constants(spec, cfg);
  const auto probes = probe_points(spec);

  g.basis = natural_basis(spec);
  g.normal = unit_normal(g.basis, probes, g.constants);

  const Expr guv = dot(g.basis[0], g.basis[1]);
  const Expr guu = dot(g.basis[0], g.basis[0]);
  const Expr gvv = dot(g.basis[1], g.basis[1]);
  g.orthogonal = detail::vanishes_on(
      guv, probes, g.constants, [&](Evaluator& ev) { return std::max(std::abs(ev(guu)), std::abs(ev(gvv))); },
      1e-12);
  g.first = first_fundamental(g.basis, g.orthogonal);
  for (const auto& p : probes) {
    Evaluator ev(p, g.constants);
    if (std::abs(ev(g.first.determinant)) < kDegeneracyTolerance)
      throw GeometryError("singular metric at (" + std::to_string(p.u) + "," + std::to_string(p.v) + ")");
  }
  g.sqrt_det = sqrt(g.first.determinant);

  g.second = second_fundamental(g.basis, g.normal);
  g.trace = curvature_trace(g.first.inverse, g.second);
  // Scale for zero detection: entries of the shape operator g^{-1} b.
  auto shape_scale = [&](Evaluator& ev) {
    double s = 0.0;
    for (int m = 0; m < 2; ++m)
      for (int n = 0; n < 2; ++n)
        s += std::abs(ev(g.first.inverse[m][0] * g.second[0][n] + g.first.inverse[m][1] * g.second[1][n]));
    return s;
  };
  if (detail::vanishes_on(g.trace, probes, g.constants, shape_scale, 1e-12) ) g.trace = Expr();
  g.mean_curvature = Expr(0.5 * cfg.convention.mean_sign) * g.trace;

  g.frame = dreibein(g.first, spec.frame_order, g.orthogonal);
  g.gamma = christoffel(g.first);
  g.spin = spin_connection(g.frame, g.gamma, cfg.convention);
  g.omega = gauge_field(g.spin, cfg.gamma);
  g.potential = gauge_potential(g.first.reciprocal, g.omega, constant("hbar"));
  return g;
}

/// det b / det g
inline Expr gaussian_curvature(const SurfaceGeometry& g) {
  const Mat2& b = g.second;
  return (b[0][0] * b[1][1] - b[0][1] * b[1][0]) / g.first.determinant;
}

/// Surface gradient r^m d_m f as a Cartesian 3-vector.
inline Vec3 surface_gradient(const SurfaceGeometry& g, const Expr& f, DerivativeCache* cache = nullptr) {
  Differentiator du(Symbol::parameter(0));
  Differentiator dv(Symbol::parameter(1));
  const Expr fu = cache ? (*cache)(f, 0) : du(f);
  const Expr fv = cache ? (*cache)(f, 1) : dv(f);
  return scale(fu, g.first.reciprocal[0]) + scale(fv, g.first.reciprocal[1]);
}

}  // namespace geomom
