#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "twoterm/errors.hpp"
#include "twoterm/expr.hpp"

namespace twoterm {
namespace {

using testing::ExprGen;

TEST(Parse, PrecedenceAndAssociativity) {
    const Expr x = Expr::variable();
    EXPECT_EQ(parse("x^2 + sin(x)/x"), pow(x, Expr::constant(2)) + Expr::unary(Op::Sin, x) / x);
    EXPECT_EQ(parse("2^3^2"), pow(Expr::constant(2), pow(Expr::constant(3), Expr::constant(2))));
    EXPECT_EQ(parse("1 - x - 2"), (Expr::constant(1) - x) - Expr::constant(2));
    EXPECT_EQ(parse("-x^2"), -pow(x, Expr::constant(2)));
    EXPECT_EQ(parse("pow(x, 3)"), pow(x, Expr::constant(3)));
    EXPECT_DOUBLE_EQ(eval(parse("2^3^2"), 0.0), 512.0);
    EXPECT_DOUBLE_EQ(eval(parse("pi"), 0.0), std::numbers::pi);
    EXPECT_DOUBLE_EQ(eval(parse("e"), 0.0), std::numbers::e);
}

TEST(Parse, PaperFunctions) {
    const Expr g1 = parse("exp(x) + x + sin(x)");
    const Jet2 j = eval_jet2(g1, 0.0);
    EXPECT_DOUBLE_EQ(j.v, 1.0);
    EXPECT_DOUBLE_EQ(j.d1, 3.0);
    EXPECT_DOUBLE_EQ(j.d2, 1.0);

    const Jet2 k = eval_jet2(parse("log(log(x))"), std::numbers::e);
    EXPECT_NEAR(k.v, 0.0, 1e-15);
    EXPECT_NEAR(k.d1, 1.0 / std::numbers::e, 1e-15);
    EXPECT_NEAR(k.d2, -2.0 / (std::numbers::e * std::numbers::e), 1e-15);

    const Jet2 s = eval_jet2(parse("x^2"), 3.0);
    EXPECT_DOUBLE_EQ(s.v, 9.0);
    EXPECT_DOUBLE_EQ(s.d1, 6.0);
    EXPECT_DOUBLE_EQ(s.d2, 2.0);
}

TEST(Parse, Errors) {
    try {
        parse("sin(x");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.kind(), ParseError::Kind::Syntax);
        EXPECT_EQ(e.offset(), 5u);
        EXPECT_FALSE(e.expected().empty());
    }
    try {
        parse("x + foo(x)");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.kind(), ParseError::Kind::UnknownFunction);
        EXPECT_EQ(e.offset(), 4u);
    }
    try {
        parse("2*y");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.kind(), ParseError::Kind::UnknownVariable);
        EXPECT_EQ(e.offset(), 2u);
    }
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse("x x"), ParseError);
    EXPECT_THROW(parse("(x"), ParseError);
}

TEST(Eval, DomainErrors) {
    try {
        eval(parse("x + log(x - 2)"), 1.0);
        FAIL();
    } catch (const EvalError& e) {
        EXPECT_EQ(e.kind(), EvalError::Kind::Domain);
        EXPECT_NE(e.subexpression().find("log"), std::string::npos);
    }
    EXPECT_THROW(eval(parse("sqrt(x)"), -1.0), EvalError);
    EXPECT_THROW(eval(parse("1/(x - 1)"), 1.0), EvalError);
    EXPECT_THROW(eval(parse("abs(x)"), 0.0), EvalError);
    EXPECT_THROW(eval(parse("x^0.5"), -4.0), EvalError);
    EXPECT_DOUBLE_EQ(eval(parse("x^3"), -2.0), -8.0);
    try {
        eval(parse("exp(x)"), 1000.0);
        FAIL();
    } catch (const EvalError& e) {
        EXPECT_EQ(e.kind(), EvalError::Kind::NonFinite);
    }
}

TEST(Eval, AbsDerivativeIsSign) {
    const Jet2 a = eval_jet2(parse("abs(x)"), -2.0);
    EXPECT_DOUBLE_EQ(a.v, 2.0);
    EXPECT_DOUBLE_EQ(a.d1, -1.0);
    EXPECT_DOUBLE_EQ(a.d2, 0.0);
}

TEST(JetProperty, MatchesCentralDifferences) {
    ExprGen gen(20240611);
    int checked = 0, attempts = 0;
    while (checked < 1000 && attempts < 20000) {
        ++attempts;
        const Expr e = gen(3);
        const double x = gen.uniform(0.5, 4.0);
        const double h = 1e-5 * (1.0 + std::fabs(x));
        Jet2 j;
        Jet2 jp, jm, jp2, jm2;
        try {
            j = eval_jet2(e, x);
            jp = eval_jet2(e, x + h);
            jm = eval_jet2(e, x - h);
            jp2 = eval_jet2(e, x + 2.0 * h);
            jm2 = eval_jet2(e, x - 2.0 * h);
        } catch (const EvalError&) {
            continue;
        }
        if (std::fabs(j.v) > 1e6 || std::fabs(j.d2) > 1e6) continue;
        // Fourth-order central stencils.
        auto stencil = [&](double m2, double m1, double p1, double p2) {
            return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
        };
        const double cd1 = stencil(jm2.v, jm.v, jp.v, jp2.v);
        const double cd2 = (-jm2.v + 16.0 * jm.v - 30.0 * j.v + 16.0 * jp.v - jp2.v) / (12.0 * h * h);
        ASSERT_LE(std::fabs(j.d1 - cd1), 1e-6 * (1.0 + std::fabs(j.d1))) << print(e) << " at " << x;
        ASSERT_LE(std::fabs(j.d2 - cd2), 1e-4 * (1.0 + std::fabs(j.d2))) << print(e) << " at " << x;
        // The derivative of the first derivative agrees as well.
        ASSERT_LE(std::fabs(j.d2 - stencil(jm2.d1, jm.d1, jp.d1, jp2.d1)), 1e-6 * (1.0 + std::fabs(j.d2))) << print(e);
        ++checked;
    }
    EXPECT_EQ(checked, 1000);
}

TEST(PrintProperty, ParseInvertsPrint) {
    ExprGen gen(7);
    for (int i = 0; i < 1000; ++i) {
        const Expr e = gen(4);
        const std::string s = print(e);
        const Expr back = parse(s);
        ASSERT_EQ(back, e) << s;
        ASSERT_EQ(print(back), s);
    }
}

TEST(JetProperty, Linearity) {
    ExprGen gen(99);
    for (int i = 0; i < 200; ++i) {
        const Expr p1 = gen(2), p2 = gen(2);
        const double c1 = gen.uniform(-3, 3), c2 = gen.uniform(-3, 3), x = gen.uniform(0.5, 4.0);
        const Expr combo = Expr::constant(std::fabs(c1)) * p1 + Expr::constant(std::fabs(c2)) * p2;
        const Jet2 a = eval_jet2(p1, x), b = eval_jet2(p2, x), j = eval_jet2(combo, x);
        const Jet2 want = std::fabs(c1) * a + std::fabs(c2) * b;
        EXPECT_LE(testing::rel_err(j.v, want.v), 1e-12);
        EXPECT_LE(testing::rel_err(j.d1, want.d1), 1e-12);
        EXPECT_LE(testing::rel_err(j.d2, want.d2), 1e-12);
    }
}

TEST(AdditiveTerms, WeightedSumReproducesExpression) {
    ExprGen gen(3);
    for (int i = 0; i < 300; ++i) {
        const Expr e = gen(3) - Expr::constant(2) * gen(2) + gen(1);
        const double x = gen.uniform(0.5, 4.0);
        double want;
        try {
            want = eval(e, x);
        } catch (const EvalError&) {
            continue;
        }
        double sum = 0.0;
        for (const Term& t : additive_terms(e)) sum += t.weight * eval(t.core, x);
        EXPECT_LE(testing::rel_err(sum, want), 1e-12) << print(e);
    }
}

}  // namespace
}  // namespace twoterm
