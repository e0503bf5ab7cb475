#include <cmath>
#include <gtest/gtest.h>

#include "geomom/evaluate.hpp"
#include "geomom/expr.hpp"
#include "geomom/parser.hpp"
#include "geomom/sampling.hpp"
#include "oracles.hpp"

using namespace geomom;

namespace {

const ConstTable kConsts{{"a", 1.3}, {"b", 0.7}};
const Domain kBox{{{0.2, 1.2}}, {{0.2, 1.2}}};

double rel_err(Complex got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

}  // namespace

TEST(Parse, Precedence) {
  const ParamPoint p{0.5, 2.0};
  EXPECT_DOUBLE_EQ(evaluate(parse("1+2*3"), p, {}).real(), 7.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("-u^2"), p, {}).real(), -0.25);
  EXPECT_DOUBLE_EQ(evaluate(parse("8/2/2"), p, {}).real(), 2.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("1-2-3"), p, {}).real(), -4.0);
  EXPECT_DOUBLE_EQ(evaluate(parse("v^(-1/2)"), p, {}).real(), 1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(evaluate(parse("(u+v)*(u-v)"), p, {}).real(), 0.25 - 4.0);
}

TEST(Parse, FrozenValue) {
  EXPECT_NEAR(evaluate(parse("cos(u)^2"), {0.7, 0.0}, {}).real(), 0.5849835714501204, 1e-15);
}

TEST(Parse, CustomParameterNames) {
  const Expr e = parse("s*t + t", {"s", "t"});
  EXPECT_DOUBLE_EQ(evaluate(e, {2.0, 3.0}, {}).real(), 9.0);
}

TEST(Parse, Builtins) {
  const Complex z = evaluate(parse("pi + i"), {0, 0}, {});
  EXPECT_DOUBLE_EQ(z.real(), std::numbers::pi);
  EXPECT_DOUBLE_EQ(z.imag(), 1.0);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("1+"), ParseError);
  EXPECT_THROW(parse("foo(u)"), ParseError);
  EXPECT_THROW(parse("sin"), ParseError);
  EXPECT_THROW(parse("u^v"), ParseError);
  EXPECT_THROW(parse("u^(1/0)"), ParseError);
  EXPECT_THROW(parse("(u+1"), ParseError);
  EXPECT_THROW(parse("u $ v"), ParseError);
  try {
    parse("u + * v");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(Evaluate, DomainErrors) {
  EXPECT_THROW(evaluate(parse("1/(u-u)"), {1, 1}, {}), EvalError);
  EXPECT_THROW(evaluate(parse("ln(u)"), {-1, 0}, {}), EvalError);
  EXPECT_THROW(evaluate(parse("tan(u)"), {std::numbers::pi / 2, 0}, {}), EvalError);
  EXPECT_THROW(evaluate(parse("sec(u)"), {3 * std::numbers::pi / 2, 0}, {}), EvalError);
  EXPECT_THROW(evaluate(parse("u^(1/2)"), {-1, 0}, {}), EvalError);
  try {
    evaluate(parse("alpha*u"), {1, 1}, {});
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_EQ(e.kind(), EvalError::Kind::UnresolvedIdentifier);
  }
}

TEST(Evaluate, CorpusMatchesHandCoded) {
  for (const auto& c : oracle::corpus()) {
    const Expr e = parse(c.source);
    for (const auto& p : sample_points(kBox, 10, 3))
      EXPECT_LT(rel_err(evaluate(e, p, kConsts), c.f(p.u, p.v)), 1e-13) << c.source;
  }
}

// [DERIVED] 20 corpus expressions x 10 points = 200 cases against central
// differences with step 1e-5.
TEST(Differentiate, MatchesCentralDifferences) {
  const double h = 1e-5;
  int cases = 0;
  for (const auto& c : oracle::corpus()) {
    const Expr e = parse(c.source);
    const Expr du = differentiate(e, 0);
    const Expr dv = differentiate(e, 1);
    for (const auto& p : sample_points(kBox, 10, 11)) {
      const double fd_u = (c.f(p.u + h, p.v) - c.f(p.u - h, p.v)) / (2 * h);
      const double fd_v = (c.f(p.u, p.v + h) - c.f(p.u, p.v - h)) / (2 * h);
      EXPECT_LT(rel_err(evaluate(du, p, kConsts), fd_u), 1e-6) << c.source;
      EXPECT_LT(rel_err(evaluate(dv, p, kConsts), fd_v), 1e-6) << c.source;
      ++cases;
    }
  }
  EXPECT_EQ(cases, 200);
}

TEST(Differentiate, Linearity) {
  const Expr f = parse("sin(u)*v^2");
  const Expr g = parse("exp(u*v)/(1+u^2)");
  const Expr lhs = differentiate(Expr(2.5) * f - Expr(0.5) * g, 0);
  const Expr rhs = Expr(2.5) * differentiate(f, 0) - Expr(0.5) * differentiate(g, 0);
  for (const auto& p : sample_points(kBox, 20, 5))
    EXPECT_NEAR(std::abs(evaluate(lhs, p, {}) - evaluate(rhs, p, {})), 0.0, 1e-13);
}

TEST(Differentiate, MixedPartialsCommute) {
  for (const auto& c : oracle::corpus()) {
    const Expr e = parse(c.source);
    const Expr uv = differentiate(differentiate(e, 0), 1);
    const Expr vu = differentiate(differentiate(e, 1), 0);
    for (const auto& p : sample_points(kBox, 5, 9)) {
      const Complex a = evaluate(uv, p, kConsts);
      EXPECT_LT(std::abs(a - evaluate(vu, p, kConsts)), 1e-10 * std::max(1.0, std::abs(a))) << c.source;
    }
  }
}

TEST(Differentiate, WithRespectToConstant) {
  const Expr e = parse("a*u^2 + a^2");
  const Expr d = differentiate(e, Symbol::named("a"));
  EXPECT_NEAR(evaluate(d, {2.0, 0.0}, kConsts).real(), 4.0 + 2 * 1.3, 1e-14);
}

TEST(Differentiate, ParameterIndependentIsLiteralZero) {
  EXPECT_TRUE(differentiate(parse("cos(v)*b"), 0).is_zero());
}

TEST(Print, RoundTrip) {
  for (const auto& c : oracle::corpus()) {
    const Expr e = parse(c.source);
    const Expr back = parse(to_string(e));
    for (const auto& p : sample_points(kBox, 50, 21)) {
      const Complex a = evaluate(e, p, kConsts);
      EXPECT_LT(std::abs(evaluate(back, p, kConsts) - a), 1e-14 * std::max(1.0, std::abs(a)))
          << c.source << " -> " << to_string(e);
    }
  }
}

TEST(Print, DerivativesRoundTrip) {
  for (const auto& c : oracle::corpus()) {
    const Expr d = differentiate(parse(c.source), 0);
    const Expr back = parse(to_string(d));
    for (const auto& p : sample_points(kBox, 10, 23)) {
      const Complex a = evaluate(d, p, kConsts);
      EXPECT_LT(std::abs(evaluate(back, p, kConsts) - a), 1e-13 * std::max(1.0, std::abs(a))) << c.source;
    }
  }
}

TEST(Print, Forms) {
  EXPECT_EQ(to_string(parse("u^2")), "u^2");
  EXPECT_EQ(to_string(parse("u^(-1/2)")), "u^(-1/2)");
  EXPECT_EQ(to_string(fold_constants(parse("0*u"))), "0");
  EXPECT_EQ(to_string(fold_constants(parse("1*u+0"))), "u");
  EXPECT_EQ(to_string(parse("1*u+0")), "1*u+0");
  EXPECT_EQ(to_string(Expr(Complex(0.0, -0.5))), "(-0.5*i)");
}

TEST(Fold, LiteralArithmetic) {
  EXPECT_TRUE(fold_constants(parse("2*3-6")).is_zero());
  EXPECT_TRUE((Expr(2.0) * Expr(3.0) - Expr(6.0)).is_zero());
  EXPECT_FALSE(parse("u - u").is_zero());
  const Expr e = fold_constants(parse("(1+2)*u"));
  EXPECT_DOUBLE_EQ(evaluate(e, {2, 0}, {}).real(), 6.0);
}

TEST(Substitute, ReplacesConstant) {
  const Expr e = substitute(parse("a*u + a"), "a", parse("v^2"));
  EXPECT_DOUBLE_EQ(evaluate(e, {2.0, 3.0}, {}).real(), 27.0);
}

TEST(Sampling, DeterministicAndInside) {
  const Domain d{{{-3.0, -0.2}, {0.2, 3.0}}, {{0.0, 6.0}}};
  const auto a = sample_points(d, 100, 42);
  const auto b = sample_points(d, 100, 42);
  ASSERT_EQ(a.size(), 100u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].u, b[k].u);
    EXPECT_EQ(a[k].v, b[k].v);
    EXPECT_TRUE(d.contains(a[k]));
    EXPECT_GT(std::abs(a[k].u), 0.2);
  }
  EXPECT_NE(sample_points(d, 1, 43)[0].u, a[0].u);
}
