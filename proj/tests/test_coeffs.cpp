#include <gtest/gtest.h>

#include <cmath>

#include "hamosc/coeffs.hpp"
#include "hamosc/errors.hpp"
#include "hamosc/expr.hpp"
#include "support/oracles.hpp"
#include "support/specs.hpp"

using namespace hamosc;

TEST(ParseExpr, Basics) {
  EXPECT_EQ(parse_expr("1").eval(0.7), 1.0);
  EXPECT_TRUE(parse_expr("1").is_constant());
  EXPECT_NEAR(parse_expr("2*t^2 - sin(t)").eval(0.0), 0.0, 0.0);
  EXPECT_NEAR(parse_expr("2*t^2 - sin(t)").eval(1.5), 2 * 2.25 - std::sin(1.5), 1e-15);
  EXPECT_FALSE(parse_expr("t").is_constant());
}

TEST(ParseExpr, PrecedenceAndAssociativity) {
  EXPECT_DOUBLE_EQ(parse_expr("2^3^2").eval(0), 512.0);
  EXPECT_DOUBLE_EQ(parse_expr("1 - 2 - 3").eval(0), -4.0);
  EXPECT_DOUBLE_EQ(parse_expr("8 / 4 / 2").eval(0), 1.0);
  EXPECT_DOUBLE_EQ(parse_expr("1 + 2 * 3").eval(0), 7.0);
  EXPECT_DOUBLE_EQ(parse_expr("-2^2").eval(0), -4.0);
  EXPECT_DOUBLE_EQ(parse_expr("(1 + 2) * 3").eval(0), 9.0);
  EXPECT_DOUBLE_EQ(parse_expr("  t\t*\n2 ").eval(3), 6.0);
  EXPECT_NEAR(parse_expr("pi").eval(0), M_PI, 0);
  EXPECT_NEAR(parse_expr("e").eval(0), M_E, 0);
  EXPECT_DOUBLE_EQ(parse_expr("1.5e2").eval(0), 150.0);
}

TEST(ParseExpr, Functions) {
  const double t = 0.3;
  EXPECT_DOUBLE_EQ(parse_expr("cos(t)").eval(t), std::cos(t));
  EXPECT_DOUBLE_EQ(parse_expr("tan(t)").eval(t), std::tan(t));
  EXPECT_DOUBLE_EQ(parse_expr("exp(t)").eval(t), std::exp(t));
  EXPECT_DOUBLE_EQ(parse_expr("log(t)").eval(t), std::log(t));
  EXPECT_DOUBLE_EQ(parse_expr("sqrt(t)").eval(t), std::sqrt(t));
  EXPECT_DOUBLE_EQ(parse_expr("abs(-t)").eval(t), t);
  EXPECT_DOUBLE_EQ(parse_expr("sinh(t)").eval(t), std::sinh(t));
  EXPECT_DOUBLE_EQ(parse_expr("cosh(t)").eval(t), std::cosh(t));
}

TEST(ParseExpr, ErrorsCarryOffsets) {
  try {
    parse_expr("2**t");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 2u);
    EXPECT_FALSE(e.expected().empty());
  }
  try {
    parse_expr("1/");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 2u);
  }
  for (const char* bad : {"", "(", "sin t", "foo(t)", "1 2", "t)", "1e", "sin()", "1 +* 2"}) {
    EXPECT_THROW(parse_expr(bad), ParseError) << bad;
  }
}

TEST(ParseExpr, DeepNestingIsRejectedNotCrashed) {
  std::string deep(100000, '(');
  EXPECT_THROW(parse_expr(deep), ParseError);
}

TEST(ParseExpr, DomainErrors) {
  EXPECT_THROW(parse_expr("1/t").eval(0.0), DomainError);
  EXPECT_THROW(parse_expr("log(t)").eval(-1.0), DomainError);
  EXPECT_THROW(parse_expr("sqrt(t)").eval(-1.0), DomainError);
  EXPECT_THROW(parse_expr("exp(t)").eval(1e6), DomainError);
}

TEST(ParseExpr, PrettyPrintRoundTrip) {
  oracle::Rng r(21);
  const char* sources[] = {"2*t^2 - sin(t)", "-t^-2^0.5 + 3", "exp(-t/3)*cos(2*t) - 1e-3",
                           "sqrt(1 + t*t) / (2 + sin(t))", "abs(t - pi) ^ 1.5 - cosh(t/10)",
                           "-(-(-t))"};
  for (const char* src : sources) {
    const auto a = parse_expr(src);
    const auto b = parse_expr(a.to_string());
    for (int k = 0; k < 100; ++k) {
      const double t = r.uniform(0.1, 5.0);
      const double va = a.eval(t), vb = b.eval(t);
      EXPECT_LE(std::abs(va - vb), 1e-12 * std::max(1.0, std::abs(va))) << src;
    }
  }
}

TEST(EvalMatrix, ConstantVariableAndErrors) {
  const auto id = TimeMatrix::constant("I", CMatrix::Identity(3, 3));
  EXPECT_TRUE(eval_matrix(id, 17.0).isApprox(CMatrix::Identity(3, 3)));
  const auto tm = testspec::expr_matrix("T", 2, {"t", "t", "t", "t"});
  EXPECT_EQ((eval_matrix(tm, 2.0) - CMatrix::Constant(2, 2, 2.0)).norm(), 0.0);
  const auto inv = testspec::expr_matrix("M", 2, {"1", "0", "0", "1/t"});
  try {
    eval_matrix(inv, 0.0);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_EQ(e.where(), "M[1][1]");
    EXPECT_EQ(e.t(), 0.0);
  }
}

TEST(EvalMatrix, ComplexEntriesAndLinearity) {
  const auto a = testspec::expr_matrix("A", 2, {"t", "1", "sin(t)", "2"}, {"0", "t^2", "-1", "0"});
  const auto b = testspec::expr_matrix("B", 2, {"cos(t)", "-3", "t", "exp(t)"}, {"1", "0", "0", "log(t)"});
  const auto sum = testspec::expr_matrix(
      "S", 2, {"(t) + (cos(t))", "(1) + (-3)", "(sin(t)) + (t)", "(2) + (exp(t))"},
      {"(0) + (1)", "(t^2) + (0)", "(-1) + (0)", "(0) + (log(t))"});
  for (double t : {0.5, 1.0, 2.5}) {
    EXPECT_LE((eval_matrix(sum, t) - (eval_matrix(a, t) + eval_matrix(b, t))).norm(), 1e-15);
  }
  EXPECT_FALSE(a.is_real());
  EXPECT_EQ(eval_matrix(a, 2.0)(0, 1), Complex(1.0, 4.0));
}

TEST(Derivative, FivePointStencil) {
  EXPECT_EQ(derivative_fd(parse_expr("3"), 1.0), 0.0);
  for (double t : {0.0, 1.0, 150.0, 1e4}) {
    EXPECT_NEAR(derivative_fd(parse_expr("sin(t)"), t), std::cos(t), 1e-11) << t;
    EXPECT_NEAR(derivative_fd(parse_expr("2 + sin(t)"), t), std::cos(t), 1e-11) << t;
  }
  EXPECT_NEAR(derivative_fd(parse_expr("exp(t/10)"), 3.0), std::exp(0.3) / 10, 1e-12);
}

TEST(Validate, SkewRotationPasses) {
  const auto rep = validate(testspec::skew_rotation());
  EXPECT_TRUE(rep.ok());
  EXPECT_TRUE(rep.B_positive_definite);
  EXPECT_EQ(rep.sample_times.size(), 257u);
  EXPECT_NEAR(rep.sample_times.front(), 0.0, 1e-12);
  EXPECT_NEAR(rep.sample_times.back(), 100.0, 1e-12);
}

TEST(Validate, AsymmetricBIsFlagged) {
  auto s = testspec::constant_spec(CMatrix::Zero(2, 2), CMatrix::Identity(2, 2), CMatrix::Zero(2, 2));
  s.B = testspec::expr_matrix("B", 2, {"1", "1", "0", "1"});
  const auto rep = validate(s);
  EXPECT_FALSE(rep.ok());
  EXPECT_FALSE(rep.hermitian_B);
  ASSERT_FALSE(rep.issues.empty());
  EXPECT_TRUE(rep.issues[0].entry == "B[0][1]" || rep.issues[0].entry == "B[1][0]");
}

TEST(Validate, SingularBlockIsHermitianButNotPositive) {
  const auto rep = validate(testspec::singular_block());
  EXPECT_TRUE(rep.ok());
  EXPECT_FALSE(rep.B_positive_definite);
}

TEST(Validate, NonPositivePAndDomainFailures) {
  auto s = testspec::skew_rotation();
  s.p = parse_expr("-1");
  EXPECT_FALSE(validate(s).p_positive);
  s.p = parse_expr("1");
  s.mu = parse_expr("log(t - 50)");
  const auto rep = validate(s);
  EXPECT_FALSE(rep.evaluable);
  EXPECT_FALSE(rep.ok());
}

TEST(ScalarSystem, Reduction) {
  auto s = testspec::constant_spec(CMatrix::Constant(1, 1, 0.5), CMatrix::Constant(1, 1, 2.0),
                                   CMatrix::Constant(1, 1, -3.0), 0.25);
  const auto sc = as_scalar_system(s);
  ASSERT_TRUE(sc.has_value());
  EXPECT_DOUBLE_EQ(sc->a11.eval(0), 0.5);
  EXPECT_DOUBLE_EQ(sc->a12.eval(0), 2.0);
  EXPECT_DOUBLE_EQ(sc->a21.eval(0), -3.0);
  EXPECT_DOUBLE_EQ(sc->a22.eval(0), -0.25);
  EXPECT_DOUBLE_EQ(sc->E(0), 0.75);
  EXPECT_FALSE(as_scalar_system(testspec::skew_rotation()).has_value());
}
