#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

#include "geomom/expr.hpp"

namespace geomom {

/// Values of the surface parameters at one point.
struct ParamPoint {
  double u = 0.0;
  double v = 0.0;

  double operator[](int i) const { return i == 0 ? u : v; }
};

/// Named real constants (alpha, beta, hbar, ...).
using ConstTable = std::map<std::string, double>;

class EvalError : public std::runtime_error {
 public:
  enum class Kind { UnresolvedIdentifier, Domain };

  EvalError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Evaluates expressions at a fixed point. Results are memoised per node, so
/// evaluating many expressions that share subtrees through one Evaluator costs
/// one visit per distinct node.
class Evaluator {
 public:
  Evaluator(ParamPoint p, const ConstTable& constants) : point_(p), constants_(&constants) {}

  const ParamPoint& point() const { return point_; }

  Complex operator()(const Expr& e) {
    const Node& n = e.node();
    switch (n.op) {
      case Op::Number: return n.value;
      case Op::Param: return point_[n.index];
      case Op::Constant: return lookup(n.name);
      default: break;
    }
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second.second;
    const Complex z = compute(n);
    memo_.emplace(e.get(), std::make_pair(e.ptr(), z));
    return z;
  }

 private:
  Complex lookup(const std::string& name) const {
    if (auto it = constants_->find(name); it != constants_->end()) return it->second;
    if (name == "pi") return std::numbers::pi;
    if (name == "i") return Complex(0.0, 1.0);
    throw EvalError(EvalError::Kind::UnresolvedIdentifier, "unresolved identifier '" + name + "'");
  }

  [[noreturn]] void domain_error(const std::string& what) const {
    throw EvalError(EvalError::Kind::Domain, what + " at (u,v)=(" + std::to_string(point_.u) + "," +
                                                 std::to_string(point_.v) + ")");
  }

  Complex compute(const Node& n) {
    auto& self = *this;
    switch (n.op) {
      case Op::Neg: return -self(n.a);
      case Op::Add: return check(self(n.a) + self(n.b), "overflow in +");
      case Op::Sub: return check(self(n.a) - self(n.b), "overflow in -");
      case Op::Mul: return check(self(n.a) * self(n.b), "overflow in *");
      case Op::Div: {
        const Complex a = self(n.a);
        const Complex b = self(n.b);
        if (auto q = kernel::divide(a, b)) return *q;
        domain_error("division by zero");
      }
      case Op::Pow: {
        if (auto p = kernel::power(self(n.a), n.exponent)) return *p;
        domain_error("power undefined");
      }
      case Op::Call: {
        if (auto y = kernel::apply(n.fn, self(n.a))) return *y;
        domain_error(std::string(fn_name(n.fn)) + " undefined");
      }
      default: break;
    }
    return {};
  }

  Complex check(Complex z, const char* what) const {
    if (!kernel::finite(z)) domain_error(what);
    return z;
  }

  ParamPoint point_;
  const ConstTable* constants_;
  std::unordered_map<const Node*, std::pair<std::shared_ptr<const Node>, Complex>> memo_;
};

/// One-shot evaluation.
inline Complex evaluate(const Expr& e, const ParamPoint& p, const ConstTable& c) {
  Evaluator ev(p, c);
  return ev(e);
}

}  // namespace geomom
