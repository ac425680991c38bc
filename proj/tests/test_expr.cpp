#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "tpbvp/expr.hpp"

using namespace tpbvp;

TEST(Parse, ProductOfPowerAndExp) {
  const ExprAst f = parse("u^2 * exp(u)", "u");
  const ExprNode expected = ExprNode::binary(
      '*', ExprNode::binary('^', ExprNode::variable(), ExprNode::constant(2)),
      ExprNode::call(Function::exp, ExprNode::variable()));
  EXPECT_EQ(f.root(), expected);
  EXPECT_EQ(f.variable(), "u");
}

TEST(Parse, ConstantLiteral) {
  const ExprAst z = parse("0", "u");
  EXPECT_EQ(z.root(), ExprNode::constant(0));
  EXPECT_EQ(z.eval(3.5), 0.0);
}

TEST(Parse, IncompleteExpressionReportsOffset) {
  try {
    parse("u +", "u");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseErrorKind::syntax);
    EXPECT_EQ(e.offset(), 3u);
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 4u);
  }
}

TEST(Parse, LineAndColumnAreOneBased) {
  try {
    parse("u +\n  * 2", "u");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);
    EXPECT_NE(std::string(e.what()).find("2:3"), std::string::npos);
  }
}

TEST(Parse, RejectsUnknownNamesAndWrongVariable) {
  try {
    parse("foo(u)", "u");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseErrorKind::unknown_identifier);
  }
  try {
    parse("t^2", "u");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseErrorKind::wrong_variable);
  }
  EXPECT_THROW(parse("2u", "u"), ParseError);
  EXPECT_THROW(parse("", "u"), ParseError);
  EXPECT_THROW(parse("(u", "u"), ParseError);
  EXPECT_THROW(parse("u)", "u"), ParseError);
  EXPECT_THROW(parse("exp u", "u"), ParseError);
}

TEST(Eval, ReferenceValues) {
  EXPECT_EQ(parse("t^4", "t").eval(0.5), 0.0625);
  const ExprAst f = parse("sqrt(u) + ln(1+u)", "u");
  EXPECT_EQ(f.eval(0.0), 0.0);
  EXPECT_NEAR(f.eval(1.0), 1.6931471805599453, 1e-15);
}

TEST(Eval, PrecedenceAndAssociativity) {
  EXPECT_EQ(parse("2+3*4", "x").eval(0.0), 14.0);
  EXPECT_EQ(parse("2^3^2", "x").eval(0.0), 512.0);
  EXPECT_EQ(parse("-2^2", "x").eval(0.0), -4.0);
  EXPECT_EQ(parse("8/4/2", "x").eval(0.0), 1.0);
  EXPECT_EQ(parse("8-4-2", "x").eval(0.0), 2.0);
  EXPECT_EQ(parse("2^-1", "x").eval(0.0), 0.5);
  EXPECT_EQ(parse("(2+3)*4", "x").eval(0.0), 20.0);
  EXPECT_EQ(parse("1.5e2 + 2E-1", "x").eval(0.0), 150.2);
  EXPECT_EQ(parse("abs(-x)", "x").eval(3.0), 3.0);
}

TEST(Eval, DomainErrorsNameTheSubexpression) {
  try {
    parse("1 + sqrt(u - 2)", "u").eval(1.0);
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_NE(e.subexpression().find("sqrt"), std::string::npos);
    EXPECT_EQ(e.argument(), -1.0);
  }
  EXPECT_THROW(parse("ln(u)", "u").eval(0.0), EvalError);
  EXPECT_THROW(parse("1/u", "u").eval(0.0), EvalError);
  EXPECT_THROW(parse("u^0.5", "u").eval(-1.0), EvalError);
  EXPECT_THROW(parse("u^-1", "u").eval(0.0), EvalError);
  EXPECT_EQ(parse("u^3", "u").eval(-2.0), -8.0);
}

TEST(Eval, OverflowIsNotADomainError) {
  EXPECT_TRUE(std::isinf(parse("exp(u)", "u").eval(1000.0)));
}

TEST(Eval, ReferenceNonlinearitiesAreNonnegative) {
  const ExprAst f1 = parse("u^2*exp(u)", "u"), f2 = parse("sqrt(u)+ln(1+u)", "u");
  for (int k = 0; k <= 1000; ++k) {
    const double u = 0.05 * k;
    EXPECT_GE(f1.eval(u), 0.0);
    EXPECT_GE(f2.eval(u), 0.0);
  }
}

TEST(Print, RoundTripIsStructural) {
  for (const char* src : {"u^2 * exp(u)", "sqrt(u)+ln(1+u)", "2^3^2", "(2^3)^2", "-u^2", "(-u)^2", "1-(2-3)",
                          "1-2-3", "u/(u*2)", "u/u*2", "-(-u)", "abs(sin(u)) + cos(u)*1e-300", "0.1+1/3"}) {
    const ExprAst a = parse(src, "u");
    const ExprAst b = parse(a.to_string(), "u");
    EXPECT_EQ(a, b) << src << " -> " << a.to_string();
  }
}

TEST(Eval, LongDouble) {
  const ExprAst f = parse("u^2*exp(u)", "u");
  EXPECT_NEAR(static_cast<double>(f.eval<long double>(1.0L)), std::exp(1.0), 1e-15);
}
