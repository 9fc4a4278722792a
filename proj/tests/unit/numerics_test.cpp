#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"
#include "twoterm/errors.hpp"
#include "twoterm/numerics.hpp"
#include "twoterm/scale.hpp"

namespace twoterm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Domain, Validation) {
    EXPECT_NO_THROW(Domain::to_infinity(2).validate());
    EXPECT_NO_THROW(Domain::above(1, 0).validate());
    EXPECT_NO_THROW(Domain::below(1, 5).validate());
    EXPECT_THROW(Domain::below(5, 5).validate(), std::invalid_argument);
    EXPECT_THROW(Domain::below(5, 1).validate(), std::invalid_argument);
    EXPECT_THROW(Domain::above(0, 1).validate(), std::invalid_argument);
    EXPECT_THROW((Domain{1.0, kInf, Approach::FromAbove}).validate(), std::invalid_argument);
}

TEST(BoundaryMesh, Examples) {
    EXPECT_EQ(boundary_mesh(Domain::to_infinity(1), 2, 2, 4), (std::vector<double>{2, 4, 8, 16}));
    EXPECT_EQ(boundary_mesh(Domain::above(2, 0), 1, 2, 4), (std::vector<double>{1, 0.5, 0.25, 0.125}));
    EXPECT_EQ(boundary_mesh(Domain::below(0, 5), 1, 2, 3), (std::vector<double>{1, 3, 4}));
    EXPECT_THROW(boundary_mesh(Domain::to_infinity(1), 2, 1.0, 4), std::invalid_argument);
    EXPECT_THROW(boundary_mesh(Domain::below(0, 5), 6, 2, 4), std::invalid_argument);
}

TEST(Limit, Examples) {
    const NumericsConfig cfg;
    const auto g1 = limit_at_boundary([](double x) { return (std::exp(x) + x + std::sin(x)) / std::exp(x); },
                                      Domain::to_infinity(2), cfg);
    ASSERT_TRUE(g1.is_finite()) << g1.diagnostic;
    EXPECT_NEAR(g1.value, 1.0, 1e-6);

    const auto one = limit_at_boundary([](double x) { return x / x; }, Domain::to_infinity(1), cfg);
    ASSERT_TRUE(one.is_finite());
    EXPECT_NEAR(one.value, 1.0, 1e-12);

    const auto ll = limit_at_boundary([](double x) { return std::log(std::log(x)) - 1.0 / std::log(x); },
                                      Domain::to_infinity(3), cfg);
    EXPECT_EQ(ll.tag, LimitVerdict::Tag::PlusInfinity);

    const auto neg = limit_at_boundary([](double x) { return -x * x; }, Domain::to_infinity(1), cfg);
    EXPECT_EQ(neg.tag, LimitVerdict::Tag::MinusInfinity);

    const auto osc = limit_at_boundary([](double x) { return std::sin(x); }, Domain::to_infinity(1), cfg);
    EXPECT_EQ(osc.tag, LimitVerdict::Tag::Indeterminate);
    EXPECT_FALSE(osc.diagnostic.empty());

    const auto algebraic = limit_at_boundary([](double x) { return 2.0 + 1.0 / x + 3.0 / (x * x); },
                                             Domain::to_infinity(1), cfg);
    ASSERT_TRUE(algebraic.is_finite());
    EXPECT_NEAR(algebraic.value, 2.0, 1e-6);

    const auto at_zero = limit_at_boundary([](double x) { return std::sin(x) / x; }, Domain::above(1, 0), cfg);
    ASSERT_TRUE(at_zero.is_finite());
    EXPECT_NEAR(at_zero.value, 1.0, 1e-6);

    const auto finite_end = limit_at_boundary([](double x) { return std::exp(x) / (1.0 + x); }, Domain::below(0, 1), cfg);
    ASSERT_TRUE(finite_end.is_finite());
    EXPECT_NEAR(finite_end.value, std::numbers::e / 2.0, 1e-6);
}

TEST(Limit, FailingSamplerThrows) {
    EXPECT_THROW(limit_at_boundary([](double) -> double { throw EvalError(EvalError::Kind::Domain, "g", "no"); },
                                   Domain::to_infinity(1), NumericsConfig{}),
                 NumericsError);
    const auto v = limit_or_indeterminate(
        [](double) -> double { throw EvalError(EvalError::Kind::Domain, "g", "no"); }, Domain::to_infinity(1), {});
    EXPECT_EQ(v.tag, LimitVerdict::Tag::Indeterminate);
}

TEST(LimitProperty, ShiftByConstant) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> c(-50, 50);
    const NumericsConfig cfg;
    const Sampler g = [](double x) { return std::atan(x) + std::exp(-x) * std::cos(x); };
    const auto base = limit_at_boundary(g, Domain::to_infinity(1), cfg);
    ASSERT_TRUE(base.is_finite());
    for (int i = 0; i < 20; ++i) {
        const double k = c(rng);
        const auto shifted = limit_at_boundary([&](double x) { return g(x) + k; }, Domain::to_infinity(1), cfg);
        ASSERT_TRUE(shifted.is_finite());
        EXPECT_NEAR(shifted.value, base.value + k, base.err + shifted.err + 1e-6 * (1 + std::fabs(base.value + k)));
    }
}

struct ClosedForm {
    const char* name;
    Sampler h;
    double from;
    Domain d;
    double exact;
};

std::vector<ClosedForm> closed_forms() {
    using std::exp;
    using std::log;
    using std::sqrt;
    return {
        {"t^-2", [](double t) { return 1.0 / (t * t); }, 1, Domain::to_infinity(1), 1.0},
        {"e^-t", [](double t) { return exp(-t); }, 0, Domain::to_infinity(0), 1.0},
        {"1/(1+t^2)", [](double t) { return 1.0 / (1.0 + t * t); }, 0, Domain::to_infinity(0), std::numbers::pi / 2},
        {"t e^-t", [](double t) { return t * exp(-t); }, 0, Domain::to_infinity(0), 1.0},
        {"1/(t(t+1))", [](double t) { return 1.0 / (t * (t + 1.0)); }, 1, Domain::to_infinity(1), std::log(2.0)},
        {"t^-1.5", [](double t) { return std::pow(t, -1.5); }, 1, Domain::to_infinity(1), 2.0},
        {"e^-2t", [](double t) { return exp(-2.0 * t); }, 1, Domain::to_infinity(1), std::exp(-2.0) / 2.0},
        {"log t/t^2", [](double t) { return log(t) / (t * t); }, 1, Domain::to_infinity(1), 1.0},
        {"1/(t^2+4)", [](double t) { return 1.0 / (t * t + 4.0); }, 0, Domain::to_infinity(0), std::numbers::pi / 4},
        {"t^-3", [](double t) { return 1.0 / (t * t * t); }, 2, Domain::to_infinity(2), 0.125},
        {"(1+t)^-2", [](double t) { return 1.0 / ((1.0 + t) * (1.0 + t)); }, 0, Domain::to_infinity(0), 1.0},
        {"e^-t cos t", [](double t) { return exp(-t) * std::cos(t); }, 0, Domain::to_infinity(0), 0.5},
        {"e^-t sin t", [](double t) { return exp(-t) * std::sin(t); }, 0, Domain::to_infinity(0), 0.5},
        {"1/sqrt(1-t)", [](double t) { return 1.0 / sqrt(1.0 - t); }, 0, Domain::below(0, 1), 2.0},
        {"1/sqrt(t) from above", [](double t) { return 1.0 / sqrt(t); }, 1, Domain::above(1, 0), -2.0},
        {"log t from above", [](double t) { return log(t); }, 1, Domain::above(1, 0), 1.0},
        {"log t / t^2", [](double t) { return log(t) / (t * t); }, 1, Domain::to_infinity(1), 1.0},
        {"t^2 e^-t", [](double t) { return t * t * exp(-t); }, 0, Domain::to_infinity(0), 2.0},
        {"2t/(1+t^2)^2", [](double t) { return 2.0 * t / ((1.0 + t * t) * (1.0 + t * t)); }, 0, Domain::to_infinity(0),
         1.0},
        {"(1/t)' from x^2, x scale", [](double t) { return -1.0 / (t * t); }, 1, Domain::to_infinity(1), -1.0},
    };
}

TEST(Integral, ClosedFormSuite) {
    const auto cases = closed_forms();
    ASSERT_EQ(cases.size(), 20u);
    for (const auto& c : cases) {
        const auto v = improper_integral(c.h, c.from, c.d, NumericsConfig{});
        ASSERT_TRUE(v.is_convergent()) << c.name << ": " << v.diagnostic;
        EXPECT_LE(std::fabs(v.value - c.exact), 10.0 * v.err + 1e-12 * (1.0 + std::fabs(c.exact)))
            << c.name << " value " << v.value << " err " << v.err;
        EXPECT_NEAR(v.value, c.exact, 1e-6 * (1.0 + std::fabs(c.exact))) << c.name;
        EXPECT_GE(v.err, 0.0);
    }
}

TEST(Integral, DivergentAndOscillatory) {
    const NumericsConfig cfg;
    const auto up = improper_integral([](double t) { return 1.0 / t; }, 1, Domain::to_infinity(1), cfg);
    ASSERT_TRUE(up.is_divergent());
    EXPECT_EQ(up.sign, 1);
    const auto down = improper_integral([](double t) { return -t; }, 1, Domain::to_infinity(1), cfg);
    ASSERT_TRUE(down.is_divergent());
    EXPECT_EQ(down.sign, -1);
    const auto pole = improper_integral([](double t) { return 1.0 / (1.0 - t); }, 0, Domain::below(0, 1), cfg);
    ASSERT_TRUE(pole.is_divergent());
    EXPECT_EQ(pole.sign, 1);

    NumericsConfig hinted;
    hinted.period_hint = std::numbers::pi;
    const auto abel = improper_integral([](double t) { return std::sin(t) / t; }, std::numbers::pi,
                                        Domain::to_infinity(std::numbers::pi), hinted);
    ASSERT_TRUE(abel.is_convergent()) << abel.diagnostic;
    // Si(inf) - Si(pi).
    EXPECT_NEAR(abel.value, std::numbers::pi / 2 - 1.851937051982466, 1e-6);

    const auto unbounded = improper_integral([](double t) { return t * std::sin(t); }, 1, Domain::to_infinity(1), hinted);
    EXPECT_FALSE(unbounded.is_convergent());
}

TEST(IntegralProperty, TighterToleranceNeverFlips) {
    auto cases = closed_forms();
    cases.push_back({"1/t", [](double t) { return 1.0 / t; }, 1, Domain::to_infinity(1), 0});
    cases.push_back({"sqrt t", [](double t) { return std::sqrt(t); }, 1, Domain::to_infinity(1), 0});
    for (const auto& c : cases) {
        NumericsConfig loose;
        loose.limit_tol = 1e-4;
        loose.quad_tol = 1e-6;
        NumericsConfig tight;
        tight.limit_tol = 1e-8;
        tight.quad_tol = 1e-10;
        const auto a = improper_integral(c.h, c.from, c.d, loose);
        const auto b = improper_integral(c.h, c.from, c.d, tight);
        EXPECT_FALSE(a.is_convergent() && b.is_divergent()) << c.name;
        EXPECT_FALSE(a.is_divergent() && b.is_convergent()) << c.name;
    }
}

TEST(Acceleration, WynnAndRichardson) {
    // Partial sums of the alternating harmonic series.
    std::vector<double> s;
    double acc = 0.0;
    for (int k = 1; k <= 14; ++k) {
        acc += (k % 2 ? 1.0 : -1.0) / k;
        s.push_back(acc);
    }
    EXPECT_NEAR(wynn_epsilon(s, 12), std::log(2.0), 1e-9);

    // a + b/2^k + c/4^k.
    std::vector<double> r;
    for (int k = 0; k < 8; ++k) r.push_back(3.0 + 5.0 / std::pow(2.0, k) - 7.0 / std::pow(4.0, k));
    EXPECT_NEAR(richardson(r, 2.0, 4), 3.0, 1e-10);
}

TEST(Iterated, InnerAndOuter) {
    // Integral of 1 times the tail of t^-3: tail is 1/(2x^2); outer gives 1/2 from 1.
    const auto v = iterated_integral([](double) { return 1.0; }, [](double t) { return 1.0 / (t * t * t); }, 1,
                                     Domain::to_infinity(1), NumericsConfig{});
    ASSERT_TRUE(v.inner.is_convergent());
    EXPECT_NEAR(v.inner.value, 0.5, 1e-8);
    ASSERT_TRUE(v.outer.is_convergent()) << v.outer.diagnostic;
    EXPECT_NEAR(v.outer.value, 0.5, 1e-6);

    // Tail of t^-2 is 1/x; its integral diverges.
    const auto d = iterated_integral([](double) { return 1.0; }, [](double t) { return 1.0 / (t * t); }, 1,
                                     Domain::to_infinity(1), NumericsConfig{});
    ASSERT_TRUE(d.inner.is_convergent());
    ASSERT_TRUE(d.outer.is_divergent());
    EXPECT_EQ(d.outer.sign, 1);
}

TEST(Identity, BoundaryIntegralOfScaleQuotient) {
    // phi2(x) + phi1(x) * integral from x to x0 of (phi2/phi1)' = 0.
    struct Pair {
        const char* p1;
        const char* p2;
        Domain d;
    };
    const Pair pairs[] = {{"x^2", "x", Domain::to_infinity(1)},
                          {"exp(x)", "x", Domain::to_infinity(2)},
                          {"x", "1", Domain::to_infinity(1)},
                          {"1", "x", Domain::above(1, 0)},
                          {"x", "exp(-x)", Domain::to_infinity(1)}};
    for (const Pair& p : pairs) {
        const ScaleContext ctx = validate_scale(parse(p.p1), parse(p.p2), p.d);
        int checked = 0;
        for (std::size_t i = 1; i < ctx.grid.size() && checked < 10; i += ctx.grid.size() / 24) {
            const double x = ctx.grid[i];
            try {
                (void)eval(ctx.phi1, x);
                (void)eval(ctx.phi2, x);
                if (eval(ctx.phi2, x) == 0.0) continue;
            } catch (const EvalError&) {
                continue;
            }
            const auto tail = improper_integral(
                [&](double t) {
                    const Jet2 q = ctx.jet2(t) / ctx.jet1(t);
                    return q.d1;
                },
                x, p.d, ctx.cfg);
            ASSERT_TRUE(tail.is_convergent()) << p.p1 << "," << p.p2 << " at " << x;
            const double lhs = eval(ctx.phi2, x) + eval(ctx.phi1, x) * tail.value;
            EXPECT_LE(std::fabs(lhs), 1e-6 * std::fabs(eval(ctx.phi2, x)) + 1e-9) << p.p1 << "," << p.p2 << " at " << x;
            ++checked;
        }
        EXPECT_EQ(checked, 10);
    }
}

}  // namespace
}  // namespace twoterm
