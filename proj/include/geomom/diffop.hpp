#pragma once

// Linear differential operators in (u, v) with 2x2 matrix coefficients:
//   A = sum_{(i,j)} a_ij(u,v) d_u^i d_v^j
// Composition follows the Leibniz rule with symbolic coefficient derivatives,
// so commutators are exact in the algebra and only judged numerically.

#include <algorithm>
#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "geomom/pauli.hpp"

namespace geomom {

inline constexpr int kMaxOrder = 4;

struct MultiIndex {
  int du = 0;
  int dv = 0;

  int order() const { return du + dv; }
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

class OperatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cached coefficient derivatives. One instance can be shared by every
/// compose/apply call that touches the same coefficient trees.
class DerivativeCache {
 public:
  DerivativeCache() : du_(Symbol::parameter(0)), dv_(Symbol::parameter(1)) {}

  Expr operator()(const Expr& e, int wrt) { return wrt == 0 ? du_(e) : dv_(e); }

  /// d_u^i d_v^j e
  Expr partial(Expr e, MultiIndex k) {
    for (int n = 0; n < k.du; ++n) e = du_(e);
    for (int n = 0; n < k.dv; ++n) e = dv_(e);
    return e;
  }

  CMat partial(const CMat& m, MultiIndex k) {
    return {partial(m.c0, k), partial(m.cx, k), partial(m.cy, k), partial(m.cz, k)};
  }

 private:
  Differentiator du_;
  Differentiator dv_;
};

class DiffOp {
 public:
  using Terms = std::map<MultiIndex, CMat>;

  DiffOp() = default;

  static DiffOp multiplication(const CMat& m) {
    DiffOp op;
    op.add_term({0, 0}, m);
    return op;
  }
  static DiffOp multiplication(const Expr& f) { return multiplication(CMat::scalar(f)); }
  static DiffOp identity() { return multiplication(CMat::identity()); }
  /// d_u^i d_v^j with identity coefficient.
  static DiffOp partial(int du, int dv) {
    DiffOp op;
    op.add_term({du, dv}, CMat::identity());
    return op;
  }

  /// Adds `coeff` to the term at `k`; literal-zero results are dropped.
  void add_term(MultiIndex k, const CMat& coeff) {
    if (k.du < 0 || k.dv < 0) throw OperatorError("negative derivative index");
    if (k.order() > kMaxOrder) throw OperatorError("operator order exceeds " + std::to_string(kMaxOrder));
    auto it = terms_.find(k);
    CMat sum = it == terms_.end() ? coeff : it->second + coeff;
    if (sum.is_zero()) {
      if (it != terms_.end()) terms_.erase(it);
      return;
    }
    if (it == terms_.end()) {
      terms_.emplace(k, sum);
    } else {
      it->second = sum;
    }
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  const CMat* coefficient(MultiIndex k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? nullptr : &it->second;
  }

  int order() const {
    int o = 0;
    for (const auto& [k, c] : terms_) o = std::max(o, k.order());
    return o;
  }

 private:
  Terms terms_;
};

inline DiffOp operator+(const DiffOp& a, const DiffOp& b) {
  DiffOp r = a;
  for (const auto& [k, c] : b.terms()) r.add_term(k, c);
  return r;
}

inline DiffOp operator-(const DiffOp& a) {
  DiffOp r;
  for (const auto& [k, c] : a.terms()) r.add_term(k, -c);
  return r;
}

inline DiffOp operator-(const DiffOp& a, const DiffOp& b) { return a + (-b); }

/// Left multiplication by a matrix field: (m A) psi = m (A psi).
inline DiffOp operator*(const CMat& m, const DiffOp& a) {
  DiffOp r;
  for (const auto& [k, c] : a.terms()) r.add_term(k, mat_mul(m, c));
  return r;
}

inline DiffOp operator*(const Expr& s, const DiffOp& a) {
  DiffOp r;
  for (const auto& [k, c] : a.terms()) r.add_term(k, s * c);
  return r;
}

namespace detail {
inline long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}
}  // namespace detail

/// (A o B) psi = A (B psi). Each term a d^alpha applied to b d^beta expands as
/// sum_{kappa <= alpha} C(alpha, kappa) a (d^kappa b) d^(alpha - kappa + beta).
inline DiffOp op_compose(const DiffOp& a, const DiffOp& b, DerivativeCache& cache) {
  if (a.order() + b.order() > kMaxOrder)
    throw OperatorError("composition order " + std::to_string(a.order() + b.order()) + " exceeds " +
                        std::to_string(kMaxOrder));
  DiffOp r;
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      for (int i = 0; i <= ka.du; ++i) {
        for (int j = 0; j <= ka.dv; ++j) {
          CMat db = cache.partial(cb, {i, j});
          if (db.is_zero()) continue;
          const double w = static_cast<double>(detail::binomial(ka.du, i) * detail::binomial(ka.dv, j));
          CMat term = mat_mul(ca, db);
          if (w != 1.0) term = Expr(w) * term;
          r.add_term({ka.du - i + kb.du, ka.dv - j + kb.dv}, term);
        }
      }
    }
  }
  return r;
}

inline DiffOp op_compose(const DiffOp& a, const DiffOp& b) {
  DerivativeCache cache;
  return op_compose(a, b, cache);
}

inline DiffOp op_commutator(const DiffOp& a, const DiffOp& b, DerivativeCache& cache) {
  return op_compose(a, b, cache) - op_compose(b, a, cache);
}

inline DiffOp op_commutator(const DiffOp& a, const DiffOp& b) {
  DerivativeCache cache;
  return op_commutator(a, b, cache);
}

/// Two-component spinor field.
struct SpinorField {
  Expr psi1;
  Expr psi2;
};

/// Applies a matrix field to a spinor: [[c0+cz, cx-i cy], [cx+i cy, c0-cz]] psi.
inline SpinorField apply_matrix(const CMat& m, const SpinorField& s) {
  const Expr i(Complex(0.0, 1.0));
  const Expr m11 = m.c0 + m.cz;
  const Expr m12 = m.cx - i * m.cy;
  const Expr m21 = m.cx + i * m.cy;
  const Expr m22 = m.c0 - m.cz;
  return {m11 * s.psi1 + m12 * s.psi2, m21 * s.psi1 + m22 * s.psi2};
}

inline SpinorField op_apply(const DiffOp& a, const SpinorField& s, DerivativeCache& cache) {
  SpinorField out{Expr(), Expr()};
  for (const auto& [k, c] : a.terms()) {
    SpinorField d{cache.partial(s.psi1, k), cache.partial(s.psi2, k)};
    SpinorField t = apply_matrix(c, d);
    out.psi1 += t.psi1;
    out.psi2 += t.psi2;
  }
  return out;
}

inline SpinorField op_apply(const DiffOp& a, const SpinorField& s) {
  DerivativeCache cache;
  return op_apply(a, s, cache);
}

/// Largest Frobenius norm of any coefficient of `a` at `ev`'s point.
inline double coefficient_max_norm(const DiffOp& a, Evaluator& ev) {
  double worst = 0.0;
  for (const auto& [k, c] : a.terms()) worst = std::max(worst, frobenius(evaluate_dense(c, ev)));
  return worst;
}

/// max over points and multi-indices of the Frobenius norm of the evaluated
/// coefficient. Zero iff the operator vanishes on the sample.
inline double op_residual_norm(const DiffOp& a, const std::vector<ParamPoint>& points, const ConstTable& c) {
  if (points.empty()) throw std::invalid_argument("op_residual_norm needs at least one point");
  double worst = 0.0;
  for (const auto& p : points) {
    Evaluator ev(p, c);
    worst = std::max(worst, coefficient_max_norm(a, ev));
  }
  return worst;
}

/// Canonical text form "(coef) ∂u^i ∂v^j + ...", terms ordered by multi-index.
inline std::string to_string(const DiffOp& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (const auto& [k, c] : a.terms()) {
    if (!out.empty()) out += " + ";
    out += "[" + to_string(c) + "]";
    if (k.du > 0) out += " ∂u^" + std::to_string(k.du);
    if (k.dv > 0) out += " ∂v^" + std::to_string(k.dv);
  }
  return out;
}

}  // namespace geomom
