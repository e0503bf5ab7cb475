#pragma once

// Seeded random operators, matrices and spinors shared by the operator tests
// and the acceptance run.

#include <random>

#include "geomom/diffop.hpp"
#include "geomom/parser.hpp"

namespace testkit {

using namespace geomom;
using Dense = std::array<Complex, 4>;

inline Dense dense_mul(const Dense& a, const Dense& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

class RandomOps {
 public:
  explicit RandomOps(std::uint64_t seed) : rng_(seed) {}

  double real(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Expr field() {
    static const char* shapes[] = {"sin(u)*v", "cos(u*v)", "u^2 - v", "exp(u)*cos(v)", "1/(1+u^2)", "v^3 + u*v",
                                   "sqrt(1+u*v)", "ln(1+u)*v"};
    const Expr f = parse(shapes[std::uniform_int_distribution<int>(0, 7)(rng_)]);
    return Expr(Complex(real(), real())) * f + Expr(real());
  }

  CMat matrix() { return {field(), field(), field(), field()}; }

  DiffOp op(int max_order) {
    DiffOp a;
    for (int o = 0; o <= max_order; ++o)
      for (int du = 0; du <= o; ++du) a.add_term({du, o - du}, matrix());
    return a;
  }

  SpinorField spinor() { return {field() * parse("sin(2*u+v)"), field() * parse("cos(u-3*v)")}; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testkit
