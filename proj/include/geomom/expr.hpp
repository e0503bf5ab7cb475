#pragma once

// Immutable scalar expression trees over the two surface parameters and named
// constants. Nodes are shared; every builder in this header returns a new
// handle and never mutates an existing node.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>

namespace geomom {

using Complex = std::complex<double>;

/// Exponent of a power node. Always normalised: den > 0, gcd(num, den) == 1.
struct Rational {
  int num = 1;
  int den = 1;

  constexpr Rational() = default;
  Rational(int n, int d = 1) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("rational exponent with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const int g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double value() const { return static_cast<double>(num) / den; }
  bool is_integer() const { return den == 1; }
  friend bool operator==(const Rational&, const Rational&) = default;
  friend Rational operator-(Rational a, int k) { return Rational(a.num - k * a.den, a.den); }
};

enum class Op : std::uint8_t { Number, Constant, Param, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Fn : std::uint8_t { Sin, Cos, Tan, Sec, Ln, Exp, Sqrt };

inline const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Tan: return "tan";
    case Fn::Sec: return "sec";
    case Fn::Ln: return "ln";
    case Fn::Exp: return "exp";
    case Fn::Sqrt: return "sqrt";
  }
  return "?";
}

inline std::optional<Fn> fn_from_name(std::string_view s) {
  if (s == "sin") return Fn::Sin;
  if (s == "cos") return Fn::Cos;
  if (s == "tan") return Fn::Tan;
  if (s == "sec") return Fn::Sec;
  if (s == "ln") return Fn::Ln;
  if (s == "exp") return Fn::Exp;
  if (s == "sqrt") return Fn::Sqrt;
  return std::nullopt;
}

struct Node;

class Expr {
 public:
  Expr();
  Expr(double x);  // NOLINT: numeric literals convert implicitly
  Expr(Complex z);  // NOLINT
  Expr(int x) : Expr(static_cast<double>(x)) {}  // NOLINT
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  /// Empty handle, only for child slots of leaf nodes.
  struct Unset {};
  explicit Expr(Unset) {}

  const Node& node() const { return *node_; }
  const Node* get() const { return node_.get(); }
  const std::shared_ptr<const Node>& ptr() const { return node_; }

  Op op() const;
  bool is_number() const { return op() == Op::Number; }
  bool is_zero() const;
  bool is_one() const;
  std::optional<Complex> number_value() const;

 private:
  std::shared_ptr<const Node> node_;
};

struct Node {
  Op op = Op::Number;
  Complex value{};
  std::string name;  // constant or parameter name
  int index = -1;    // parameter slot (0 = first parameter, 1 = second)
  Fn fn = Fn::Sin;
  Rational exponent{};
  Expr a{Expr::Unset{}};
  Expr b{Expr::Unset{}};
};

namespace detail {
inline std::shared_ptr<const Node> number_node(Complex z) {
  auto n = std::make_shared<Node>();
  n->op = Op::Number;
  n->value = z;
  return n;
}
inline const std::shared_ptr<const Node>& zero_node() {
  static const std::shared_ptr<const Node> z = number_node(0.0);
  return z;
}
inline const std::shared_ptr<const Node>& one_node() {
  static const std::shared_ptr<const Node> z = number_node(1.0);
  return z;
}
}  // namespace detail

inline Expr::Expr() : node_(detail::zero_node()) {}
inline Expr::Expr(double x)
    : node_(x == 0.0 ? detail::zero_node() : x == 1.0 ? detail::one_node() : detail::number_node(x)) {}
inline Expr::Expr(Complex z)
    : node_(z == Complex(0.0) ? detail::zero_node()
            : z == Complex(1.0) ? detail::one_node()
                                : detail::number_node(z)) {}
inline Op Expr::op() const { return node_->op; }
inline bool Expr::is_zero() const { return node_->op == Op::Number && node_->value == Complex(0.0); }
inline bool Expr::is_one() const { return node_->op == Op::Number && node_->value == Complex(1.0); }
inline std::optional<Complex> Expr::number_value() const {
  if (node_->op == Op::Number) return node_->value;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Raw constructors: build exactly the node asked for, no folding. The parser
// uses these so that fold_constants has something to do.

namespace raw {
inline Expr number(Complex z) { return Expr(detail::number_node(z)); }
inline Expr constant(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Constant;
  n->name = std::move(name);
  return Expr(std::move(n));
}
inline Expr param(int index, std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Param;
  n->index = index;
  n->name = std::move(name);
  return Expr(std::move(n));
}
inline Expr unary(Op op, Expr a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  return Expr(std::move(n));
}
inline Expr binary(Op op, Expr a, Expr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return Expr(std::move(n));
}
inline Expr pow(Expr a, Rational r) {
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->a = std::move(a);
  n->exponent = r;
  return Expr(std::move(n));
}
inline Expr call(Fn f, Expr a) {
  auto n = std::make_shared<Node>();
  n->op = Op::Call;
  n->fn = f;
  n->a = std::move(a);
  return Expr(std::move(n));
}
}  // namespace raw

inline Expr constant(std::string name) { return raw::constant(std::move(name)); }
inline Expr param(int index, std::string name) { return raw::param(index, std::move(name)); }

// ---------------------------------------------------------------------------
// Numeric kernels shared by folding and evaluation. Each returns nullopt when
// the operation is undefined at the given arguments.

namespace kernel {

inline constexpr double kPoleTolerance = 1e-12;

inline bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline std::optional<Complex> checked(Complex z) {
  if (!finite(z)) return std::nullopt;
  return z;
}

inline std::optional<Complex> divide(Complex a, Complex b) {
  if (b == Complex(0.0)) return std::nullopt;
  return checked(a / b);
}

inline std::optional<Complex> power(Complex base, Rational r) {
  if (r.num == 0) return Complex(1.0);
  if (base == Complex(0.0)) {
    if (r.num < 0) return std::nullopt;
    return Complex(0.0);
  }
  if (r.is_integer()) {
    Complex acc(1.0);
    Complex b = r.num < 0 ? Complex(1.0) / base : base;
    for (int k = r.num < 0 ? -r.num : r.num; k > 0; k >>= 1) {
      if (k & 1) acc *= b;
      b *= b;
    }
    return checked(acc);
  }
  if (base.imag() == 0.0) {
    if (base.real() < 0.0) return std::nullopt;
    return checked(Complex(std::pow(base.real(), r.value())));
  }
  return checked(std::pow(base, r.value()));
}

inline std::optional<Complex> apply_real(Fn f, double x) {
  switch (f) {
    case Fn::Sin: return Complex(std::sin(x));
    case Fn::Cos: return Complex(std::cos(x));
    case Fn::Tan: {
      const double c = std::cos(x);
      if (std::abs(c) < kPoleTolerance) return std::nullopt;
      return checked(std::sin(x) / c);
    }
    case Fn::Sec: {
      const double c = std::cos(x);
      if (std::abs(c) < kPoleTolerance) return std::nullopt;
      return checked(1.0 / c);
    }
    case Fn::Ln:
      if (x <= 0.0) return std::nullopt;
      return Complex(std::log(x));
    case Fn::Exp: return checked(std::exp(x));
    case Fn::Sqrt:
      if (x < 0.0) return Complex(0.0, std::sqrt(-x));
      return Complex(std::sqrt(x));
  }
  return std::nullopt;
}

inline std::optional<Complex> apply(Fn f, Complex x) {
  if (!finite(x)) return std::nullopt;
  if (x.imag() == 0.0) return apply_real(f, x.real());
  switch (f) {
    case Fn::Sin: return checked(std::sin(x));
    case Fn::Cos: return checked(std::cos(x));
    case Fn::Tan: {
      const Complex c = std::cos(x);
      if (std::abs(c) < kPoleTolerance) return std::nullopt;
      return checked(std::sin(x) / c);
    }
    case Fn::Sec: {
      const Complex c = std::cos(x);
      if (std::abs(c) < kPoleTolerance) return std::nullopt;
      return checked(Complex(1.0) / c);
    }
    case Fn::Ln: return checked(std::log(x));
    case Fn::Exp: return checked(std::exp(x));
    case Fn::Sqrt: return checked(std::sqrt(x));
  }
  return std::nullopt;
}

}  // namespace kernel

// ---------------------------------------------------------------------------
// Folding constructors: collapse literal subtrees and apply 0/1 identities.

inline Expr neg(const Expr& a) {
  if (auto v = a.number_value()) return Expr(-*v);
  if (a.op() == Op::Neg) return a.node().a;
  return raw::unary(Op::Neg, a);
}

inline Expr operator-(const Expr& a) { return neg(a); }

inline Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  auto va = a.number_value();
  auto vb = b.number_value();
  if (va && vb) return Expr(*va + *vb);
  if (b.op() == Op::Neg) return raw::binary(Op::Sub, a, b.node().a);
  return raw::binary(Op::Add, a, b);
}

inline Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return neg(b);
  auto va = a.number_value();
  auto vb = b.number_value();
  if (va && vb) return Expr(*va - *vb);
  if (b.op() == Op::Neg) return raw::binary(Op::Add, a, b.node().a);
  return raw::binary(Op::Sub, a, b);
}

inline Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  auto va = a.number_value();
  auto vb = b.number_value();
  if (va && vb) return Expr(*va * *vb);
  if (va && *va == Complex(-1.0)) return neg(b);
  if (vb && *vb == Complex(-1.0)) return neg(a);
  // literal * (literal * x) -> (literal*literal) * x
  if (va && b.op() == Op::Mul) {
    if (auto vc = b.node().a.number_value()) return Expr(*va * *vc) * b.node().b;
  }
  if (vb && !va) return b * a;
  if (a.op() == Op::Neg && b.op() == Op::Neg) return a.node().a * b.node().a;
  if (a.op() == Op::Neg) return neg(a.node().a * b);
  if (b.op() == Op::Neg) return neg(a * b.node().a);
  return raw::binary(Op::Mul, a, b);
}

inline Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_one()) return a;
  if (a.is_zero()) return Expr();
  auto va = a.number_value();
  auto vb = b.number_value();
  if (va && vb) {
    if (auto q = kernel::divide(*va, *vb)) return Expr(*q);
  }
  if (a.op() == Op::Neg) return neg(a.node().a / b);
  if (b.op() == Op::Neg) return neg(a / b.node().a);
  return raw::binary(Op::Div, a, b);
}

inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

inline Expr pow(const Expr& a, Rational r) {
  if (r.num == 0) return Expr(1.0);
  if (r == Rational(1)) return a;
  if (auto v = a.number_value()) {
    if (auto p = kernel::power(*v, r)) return Expr(*p);
  }
  return raw::pow(a, r);
}

inline Expr call(Fn f, const Expr& a) {
  if (auto v = a.number_value()) {
    if (auto y = kernel::apply(f, *v)) return Expr(*y);
  }
  return raw::call(f, a);
}

inline Expr sin(const Expr& a) { return call(Fn::Sin, a); }
inline Expr cos(const Expr& a) { return call(Fn::Cos, a); }
inline Expr tan(const Expr& a) { return call(Fn::Tan, a); }
inline Expr sec(const Expr& a) { return call(Fn::Sec, a); }
inline Expr ln(const Expr& a) { return call(Fn::Ln, a); }
inline Expr exp(const Expr& a) { return call(Fn::Exp, a); }
inline Expr sqrt(const Expr& a) { return call(Fn::Sqrt, a); }
inline Expr square(const Expr& a) { return pow(a, Rational(2)); }

/// Rebuilds the tree bottom-up through the folding constructors. The result
/// evaluates to the same value wherever the input is defined.
inline Expr fold_constants(const Expr& e) {
  std::unordered_map<const Node*, Expr> memo;
  auto rec = [&](auto&& self, const Expr& x) -> Expr {
    const Node& n = x.node();
    switch (n.op) {
      case Op::Number:
      case Op::Constant:
      case Op::Param: return x;
      default: break;
    }
    if (auto it = memo.find(x.get()); it != memo.end()) return it->second;
    Expr out;
    switch (n.op) {
      case Op::Neg: out = neg(self(self, n.a)); break;
      case Op::Add: out = self(self, n.a) + self(self, n.b); break;
      case Op::Sub: out = self(self, n.a) - self(self, n.b); break;
      case Op::Mul: out = self(self, n.a) * self(self, n.b); break;
      case Op::Div: out = self(self, n.a) / self(self, n.b); break;
      case Op::Pow: out = pow(self(self, n.a), n.exponent); break;
      case Op::Call: out = call(n.fn, self(self, n.a)); break;
      default: out = x; break;
    }
    memo.emplace(x.get(), out);
    return out;
  };
  return rec(rec, e);
}

// ---------------------------------------------------------------------------
// Symbolic differentiation.

/// Differentiation variable: a surface parameter slot or a named constant.
struct Symbol {
  enum class Kind { Param, Constant } kind = Kind::Param;
  int index = 0;
  std::string name;

  static Symbol parameter(int i) { return {Kind::Param, i, {}}; }
  static Symbol named(std::string n) { return {Kind::Constant, -1, std::move(n)}; }
};

/// Memoising differentiator. Reusing one instance across many calls avoids
/// re-deriving shared subtrees; keys hold a reference so addresses stay valid.
class Differentiator {
 public:
  explicit Differentiator(Symbol wrt) : wrt_(std::move(wrt)) {}

  Expr operator()(const Expr& e) {
    const Node& n = e.node();
    switch (n.op) {
      case Op::Number: return Expr();
      case Op::Constant:
        return (wrt_.kind == Symbol::Kind::Constant && n.name == wrt_.name) ? Expr(1.0) : Expr();
      case Op::Param:
        return (wrt_.kind == Symbol::Kind::Param && n.index == wrt_.index) ? Expr(1.0) : Expr();
      default: break;
    }
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second.second;
    Expr d = derive(n);
    memo_.emplace(e.get(), std::make_pair(e.ptr(), d));
    return d;
  }

 private:
  Expr derive(const Node& n) {
    auto& self = *this;
    switch (n.op) {
      case Op::Neg: return neg(self(n.a));
      case Op::Add: return self(n.a) + self(n.b);
      case Op::Sub: return self(n.a) - self(n.b);
      case Op::Mul: return self(n.a) * n.b + n.a * self(n.b);
      case Op::Div: {
        Expr da = self(n.a);
        Expr db = self(n.b);
        return da / n.b - (n.a * db) / square(n.b);
      }
      case Op::Pow: {
        Expr da = self(n.a);
        if (da.is_zero()) return Expr();
        const Rational r = n.exponent;
        return Expr(r.value()) * pow(n.a, r - 1) * da;
      }
      case Op::Call: {
        Expr da = self(n.a);
        if (da.is_zero()) return Expr();
        switch (n.fn) {
          case Fn::Sin: return cos(n.a) * da;
          case Fn::Cos: return neg(sin(n.a) * da);
          case Fn::Tan: return square(sec(n.a)) * da;
          case Fn::Sec: return sec(n.a) * tan(n.a) * da;
          case Fn::Ln: return da / n.a;
          case Fn::Exp: return exp(n.a) * da;
          case Fn::Sqrt: return da / (Expr(2.0) * sqrt(n.a));
        }
        return Expr();
      }
      default: return Expr();
    }
  }

  Symbol wrt_;
  std::unordered_map<const Node*, std::pair<std::shared_ptr<const Node>, Expr>> memo_;
};

/// Derivative with respect to parameter slot `wrt` (0 or 1).
inline Expr differentiate(const Expr& e, int wrt) { return Differentiator(Symbol::parameter(wrt))(e); }
inline Expr differentiate(const Expr& e, const Symbol& wrt) { return Differentiator(wrt)(e); }

/// Replaces every occurrence of constant `name` by `replacement`.
inline Expr substitute(const Expr& e, const std::string& name, const Expr& replacement) {
  std::unordered_map<const Node*, Expr> memo;
  auto rec = [&](auto&& self, const Expr& x) -> Expr {
    const Node& n = x.node();
    switch (n.op) {
      case Op::Number:
      case Op::Param: return x;
      case Op::Constant: return n.name == name ? replacement : x;
      default: break;
    }
    if (auto it = memo.find(x.get()); it != memo.end()) return it->second;
    Expr out;
    switch (n.op) {
      case Op::Neg: out = neg(self(self, n.a)); break;
      case Op::Add: out = self(self, n.a) + self(self, n.b); break;
      case Op::Sub: out = self(self, n.a) - self(self, n.b); break;
      case Op::Mul: out = self(self, n.a) * self(self, n.b); break;
      case Op::Div: out = self(self, n.a) / self(self, n.b); break;
      case Op::Pow: out = pow(self(self, n.a), n.exponent); break;
      case Op::Call: out = call(n.fn, self(self, n.a)); break;
      default: out = x; break;
    }
    memo.emplace(x.get(), out);
    return out;
  };
  return rec(rec, e);
}

/// Number of distinct nodes reachable from `e`.
inline std::size_t node_count(const Expr& e) {
  std::unordered_map<const Node*, bool> seen;
  auto rec = [&](auto&& self, const Expr& x) -> void {
    if (!seen.emplace(x.get(), true).second) return;
    const Node& n = x.node();
    if (n.op == Op::Neg || n.op == Op::Pow || n.op == Op::Call) self(self, n.a);
    if (n.op == Op::Add || n.op == Op::Sub || n.op == Op::Mul || n.op == Op::Div) {
      self(self, n.a);
      self(self, n.b);
    }
  };
  rec(rec, e);
  return seen.size();
}

// ---------------------------------------------------------------------------
// Printing. Output re-parses to an evaluation-equivalent tree.

namespace detail {

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  // shortest representation that round-trips
  for (int prec = 1; prec < 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) {
      s = buf;
      break;
    }
  }
  return s;
}

inline int precedence(const Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Number: {
      if (n.value.imag() != 0.0) return 5;  // printed parenthesised
      return n.value.real() < 0 ? 3 : 5;
    }
    default: return 5;
  }
}

inline void print_rec(const Expr& e, std::string& out);

inline void print_child(const Expr& e, int min_prec, std::string& out) {
  if (precedence(e.node()) < min_prec) {
    out += '(';
    print_rec(e, out);
    out += ')';
  } else {
    print_rec(e, out);
  }
}

inline void print_number(Complex z, std::string& out) {
  if (z.imag() == 0.0) {
    if (z.real() < 0) {
      out += '-';
      out += format_real(-z.real());
    } else {
      out += format_real(z.real());
    }
    return;
  }
  out += '(';
  if (z.real() != 0.0) {
    out += format_real(z.real());
    out += z.imag() < 0 ? "-" : "+";
  } else if (z.imag() < 0) {
    out += '-';
  }
  const double im = std::abs(z.imag());
  if (im != 1.0) {
    out += format_real(im);
    out += '*';
  }
  out += "i)";
}

inline void print_rec(const Expr& e, std::string& out) {
  const Node& n = e.node();
  switch (n.op) {
    case Op::Number: print_number(n.value, out); return;
    case Op::Constant:
    case Op::Param: out += n.name; return;
    case Op::Neg:
      out += '-';
      print_child(n.a, 4, out);
      return;
    case Op::Add:
    case Op::Sub:
      print_child(n.a, 1, out);
      out += n.op == Op::Add ? "+" : "-";
      print_child(n.b, n.op == Op::Add ? 3 : 2, out);
      return;
    case Op::Mul:
    case Op::Div:
      print_child(n.a, 2, out);
      out += n.op == Op::Mul ? "*" : "/";
      print_child(n.b, 3, out);
      return;
    case Op::Pow: {
      print_child(n.a, 5, out);
      out += '^';
      const Rational r = n.exponent;
      if (r.is_integer() && r.num >= 0) {
        out += std::to_string(r.num);
      } else if (r.is_integer()) {
        out += "(" + std::to_string(r.num) + ")";
      } else {
        out += "(" + std::to_string(r.num) + "/" + std::to_string(r.den) + ")";
      }
      return;
    }
    case Op::Call:
      out += fn_name(n.fn);
      out += '(';
      print_rec(n.a, out);
      out += ')';
      return;
  }
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print_rec(e, out);
  return out;
}

}  // namespace geomom
