#pragma once

// 2x2 complex matrix fields in the Pauli basis: c0*I + cx*sx + cy*sy + cz*sz.

#include <array>
#include <cmath>
#include <string>

#include "geomom/evaluate.hpp"
#include "geomom/expr.hpp"

namespace geomom {

/// Dense 2x2 complex matrix, row major.
using Dense2 = std::array<Complex, 4>;

struct CMat {
  Expr c0, cx, cy, cz;

  static CMat scalar(Expr s) { return {std::move(s), Expr(), Expr(), Expr()}; }
  static CMat identity() { return scalar(Expr(1.0)); }
  static CMat sigma_x() { return {Expr(), Expr(1.0), Expr(), Expr()}; }
  static CMat sigma_y() { return {Expr(), Expr(), Expr(1.0), Expr()}; }
  static CMat sigma_z() { return {Expr(), Expr(), Expr(), Expr(1.0)}; }

  const Expr& operator[](int k) const {
    switch (k) {
      case 0: return c0;
      case 1: return cx;
      case 2: return cy;
      default: return cz;
    }
  }
  Expr& operator[](int k) {
    switch (k) {
      case 0: return c0;
      case 1: return cx;
      case 2: return cy;
      default: return cz;
    }
  }

  /// True when every coefficient folded to the literal zero.
  bool is_zero() const { return c0.is_zero() && cx.is_zero() && cy.is_zero() && cz.is_zero(); }
};

inline CMat operator+(const CMat& a, const CMat& b) {
  return {a.c0 + b.c0, a.cx + b.cx, a.cy + b.cy, a.cz + b.cz};
}
inline CMat operator-(const CMat& a, const CMat& b) {
  return {a.c0 - b.c0, a.cx - b.cx, a.cy - b.cy, a.cz - b.cz};
}
inline CMat operator-(const CMat& a) { return {-a.c0, -a.cx, -a.cy, -a.cz}; }
inline CMat operator*(const Expr& s, const CMat& a) { return {s * a.c0, s * a.cx, s * a.cy, s * a.cz}; }
inline CMat& operator+=(CMat& a, const CMat& b) { return a = a + b; }

/// Pauli-algebra product: (a0 + a.s)(b0 + b.s) = a0 b0 + a.b + (a0 b + b0 a + i a x b).s
inline CMat mat_mul(const CMat& a, const CMat& b) {
  const Expr i(Complex(0.0, 1.0));
  CMat r;
  r.c0 = a.c0 * b.c0 + a.cx * b.cx + a.cy * b.cy + a.cz * b.cz;
  r.cx = a.c0 * b.cx + b.c0 * a.cx + i * (a.cy * b.cz - a.cz * b.cy);
  r.cy = a.c0 * b.cy + b.c0 * a.cy + i * (a.cz * b.cx - a.cx * b.cz);
  r.cz = a.c0 * b.cz + b.c0 * a.cz + i * (a.cx * b.cy - a.cy * b.cx);
  return r;
}

inline CMat operator*(const CMat& a, const CMat& b) { return mat_mul(a, b); }

inline CMat mat_commutator(const CMat& a, const CMat& b) { return mat_mul(a, b) - mat_mul(b, a); }

inline CMat differentiate(const CMat& m, Differentiator& d) { return {d(m.c0), d(m.cx), d(m.cy), d(m.cz)}; }

inline CMat fold_constants(const CMat& m) {
  return {fold_constants(m.c0), fold_constants(m.cx), fold_constants(m.cy), fold_constants(m.cz)};
}

/// Numeric Pauli coefficients at one point.
inline std::array<Complex, 4> evaluate_coeffs(const CMat& m, Evaluator& ev) {
  return {ev(m.c0), ev(m.cx), ev(m.cy), ev(m.cz)};
}

inline Dense2 to_dense(const std::array<Complex, 4>& c) {
  const Complex i(0.0, 1.0);
  return {c[0] + c[3], c[1] - i * c[2], c[1] + i * c[2], c[0] - c[3]};
}

inline Dense2 evaluate_dense(const CMat& m, Evaluator& ev) { return to_dense(evaluate_coeffs(m, ev)); }

inline std::array<Complex, 4> from_dense(const Dense2& d) {
  const Complex i(0.0, 1.0);
  return {(d[0] + d[3]) / 2.0, (d[1] + d[2]) / 2.0, (d[2] - d[1]) / (2.0 * i), (d[0] - d[3]) / 2.0};
}

inline double frobenius(const Dense2& d) {
  double s = 0.0;
  for (const auto& z : d) s += std::norm(z);
  return std::sqrt(s);
}

inline const char* pauli_label(int k) {
  static const char* labels[] = {"I", "sigma_x", "sigma_y", "sigma_z"};
  return labels[k];
}

/// "c0*I + cx*sigma_x + ..." with literal-zero terms omitted.
inline std::string to_string(const CMat& m) {
  std::string out;
  for (int k = 0; k < 4; ++k) {
    if (m[k].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + to_string(m[k]) + ")*" + pauli_label(k);
  }
  return out.empty() ? "0" : out;
}

}  // namespace geomom
