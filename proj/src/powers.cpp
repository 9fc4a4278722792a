#include "twoterm/powers.hpp"

#include <cmath>
#include <stdexcept>

#include "twoterm/errors.hpp"

namespace twoterm {

void PowerScale::validate() const {
    if (!std::isfinite(alpha1) || !std::isfinite(alpha2)) throw std::invalid_argument("power exponents must be finite");
    if (!(alpha1 > alpha2)) throw std::invalid_argument("power scale needs alpha1 > alpha2");
}

Domain PowerScale::domain() const {
    return direction == PowerDirection::ToInfinity ? Domain::to_infinity(1.0) : Domain::above(1.0, 0.0);
}

double euler_L(const PowerScale& ps, const Expr& f, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("euler_L needs x > 0");
    const Jet2 j = eval_jet2(f, x);
    return j.d2 + (1.0 - ps.alpha1 - ps.alpha2) * j.d1 / x + ps.alpha1 * ps.alpha2 * j.v / (x * x);
}

ContactPoint power_contact(const PowerScale& ps, const Expr& f, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("power_contact needs x > 0");
    const double a1 = ps.alpha1, a2 = ps.alpha2, d = a2 - a1;
    const Jet2 j = eval_jet2(f, x);
    const double f1 = (-x * j.d1 + a2 * j.v) / (d * std::pow(x, a1));
    const double f2 = (x * j.d1 - a1 * j.v) / (d * std::pow(x, a2));
    const double F = ((std::pow(x, a1) - std::pow(x, a2)) * j.d1 -
                      (a1 * std::pow(x, a1 - 1.0) - a2 * std::pow(x, a2 - 1.0)) * j.v) /
                     (d * std::pow(x, a1 + a2 - 1.0));
    return {x, f1, f2, F};
}

std::optional<double> power_exponent(const Expr& e) {
    switch (e.op()) {
        case Op::Constant: return e.value() == 1.0 ? std::optional<double>(0.0) : std::nullopt;
        case Op::Variable: return 1.0;
        case Op::Sqrt: {
            const auto a = power_exponent(e.children()[0]);
            return a ? std::optional<double>(*a / 2.0) : std::nullopt;
        }
        case Op::Mul:
        case Op::Div: {
            const auto a = power_exponent(e.children()[0]);
            const auto b = power_exponent(e.children()[1]);
            if (!a || !b) return std::nullopt;
            return e.op() == Op::Mul ? *a + *b : *a - *b;
        }
        case Op::Pow: {
            const Expr& ex = e.children()[1];
            if (ex.depends_on_x()) return std::nullopt;
            const auto a = power_exponent(e.children()[0]);
            if (!a) return std::nullopt;
            return *a * eval(ex, 1.0);
        }
        default: return std::nullopt;
    }
}

namespace {

std::optional<double> unit_power(const Expr& e) {
    const auto terms = additive_terms(e);
    if (terms.size() != 1 || terms[0].weight != 1.0) return std::nullopt;
    return power_exponent(terms[0].core);
}

}  // namespace

std::optional<PowerScale> detect_power_scale(const Expr& phi1, const Expr& phi2, const Domain& d) {
    const auto p = unit_power(phi1);
    const auto q = unit_power(phi2);
    if (!p || !q || *p == *q) return std::nullopt;
    if (d.infinite() && d.approach == Approach::FromBelow && d.T == 1.0 && *p > *q)
        return PowerScale{*p, *q, PowerDirection::ToInfinity};
    if (!d.infinite() && d.x0 == 0.0 && d.approach == Approach::FromAbove && d.T == 1.0 && *p < *q)
        return PowerScale{*q, *p, PowerDirection::ToZero};
    return std::nullopt;
}

Expr power_expr(double alpha) {
    if (alpha == 0.0) return Expr::constant(1.0);
    if (alpha == 1.0) return Expr::variable();
    return pow(Expr::variable(), alpha);
}

ScaleContext power_context(const PowerScale& ps, const NumericsConfig& cfg) {
    ps.validate();
    return validate_scale(power_expr(ps.dominant()), power_expr(ps.subdominant()), ps.domain(), cfg);
}

namespace {

/// f = k1 x^alpha1 + k2 x^alpha2 + residual.
struct PowerSplit {
    double k1 = 0.0, k2 = 0.0;
    Expr residual;
    bool has_residual = false;

    Jet2 rjet(double x) const { return has_residual ? eval_jet2(residual, x) : Jet2{}; }
};

PowerSplit split_powers(const PowerScale& ps, const Expr& f) {
    PowerSplit s;
    for (const Term& t : additive_terms(f)) {
        const auto a = power_exponent(t.core);
        if (a && *a == ps.alpha1) {
            s.k1 += t.weight;
        } else if (a && *a == ps.alpha2) {
            s.k2 += t.weight;
        } else {
            const Expr term = t.weight == 1.0 ? t.core : Expr::constant(t.weight) * t.core;
            s.residual = s.has_residual ? s.residual + term : term;
            s.has_residual = true;
        }
    }
    return s;
}

double residual_L(const PowerScale& ps, const PowerSplit& s, double x) {
    if (!s.has_residual) return 0.0;
    return euler_L(ps, s.residual, x);
}

struct Half {
    LimitVerdict coeff;
    IntegralVerdict integral;
};

/// Coefficient of x^alpha from the boundary term at 1 and the oriented
/// integral of t^(1-alpha) L[r]; `other` is the remaining exponent.
Half coefficient(const PowerScale& ps, const PowerSplit& s, double alpha, double other, double k,
                 const NumericsConfig& cfg) {
    Half h;
    if (!s.has_residual) {
        h.integral = IntegralVerdict::convergent(0.0, 0.0);
        h.coeff = LimitVerdict::finite(k, 0.0);
        return h;
    }
    const Domain d = ps.domain();
    h.integral = integral_or_indeterminate(
        [&](double t) { return std::pow(t, 1.0 - alpha) * residual_L(ps, s, t); }, 1.0, d, cfg);
    const double scale = 1.0 / (alpha - other);
    const Jet2 r1 = s.rjet(1.0);
    if (h.integral.is_convergent()) {
        h.coeff = LimitVerdict::finite(k + (r1.d1 - other * r1.v + h.integral.value) * scale,
                                       h.integral.err * std::fabs(scale));
    } else if (h.integral.is_divergent() && h.integral.sign != 0) {
        h.coeff = h.integral.sign * scale > 0 ? LimitVerdict::plus_infinity("coefficient integral diverges")
                                              : LimitVerdict::minus_infinity("coefficient integral diverges");
    } else {
        h.coeff = LimitVerdict::indeterminate("coefficient integral has no verdict");
    }
    return h;
}

}  // namespace

PowerCoefficients power_coefficient_formulas(const PowerScale& ps, const Expr& f, const NumericsConfig& cfg) {
    ps.validate();
    const PowerSplit s = split_powers(ps, f);
    const double dom = ps.dominant(), sub = ps.subdominant();
    const bool inf = ps.direction == PowerDirection::ToInfinity;
    const Half hd = coefficient(ps, s, dom, sub, inf ? s.k1 : s.k2, cfg);
    const Half hs = coefficient(ps, s, sub, dom, inf ? s.k2 : s.k1, cfg);
    PowerCoefficients c;
    c.dominant_integral = hd.integral;
    c.subdominant_integral = hs.integral;
    c.a1 = inf ? hd.coeff : hs.coeff;
    c.a2 = inf ? hs.coeff : hd.coeff;
    return c;
}

PowerAnalysis analyze_powers(const PowerScale& ps, const Expr& f, const NumericsConfig& cfg) {
    ps.validate();
    PowerAnalysis out;
    out.scale = ps;
    out.coeffs = power_coefficient_formulas(ps, f, cfg);
    out.tangent_criterion = out.coeffs.subdominant_integral;

    const PowerSplit s = split_powers(ps, f);
    const Domain d = ps.domain();
    const double dom = ps.dominant(), sub = ps.subdominant();
    const bool inf = ps.direction == PowerDirection::ToInfinity;

    out.asymptote_criterion = iterated_integral([&](double t) { return std::pow(t, dom - sub - 1.0); },
                                                [&](double t) { return std::pow(t, 1.0 - dom) * residual_L(ps, s, t); },
                                                1.0, d, cfg);

    const double k_dom = inf ? s.k1 : s.k2, k_sub = inf ? s.k2 : s.k1;
    const double cap = 0.1 * cfg.limit_tol;
    auto rval = [&](double x) { return s.rjet(x).v; };
    auto rprime = [&](double x) { return s.rjet(x).d1; };

    // Direct limits, used as cross-checks and where the integral formulas
    // have no verdict.
    LimitVerdict dom_direct = limit_or_indeterminate([&](double x) { return rval(x) / std::pow(x, dom); }, d, cfg);
    if (dom_direct.is_finite()) dom_direct.value += k_dom;
    const LimitVerdict& dom_formula = inf ? out.coeffs.a1 : out.coeffs.a2;
    const LimitVerdict a_dom = dom_formula.is_finite() ? dom_formula : dom_direct;

    LimitVerdict sub_direct = LimitVerdict::indeterminate("dominant coefficient is not finite");
    if (a_dom.is_finite()) {
        const double delta_dom = k_dom - a_dom.value;
        sub_direct = limit_or_indeterminate(
            sensitivity_guard([&](double x) { return (rval(x) + delta_dom * std::pow(x, dom)) / std::pow(x, sub); },
                              [&](double x) { return std::pow(x, dom - sub); }, a_dom.err, cap),
            d, cfg);
        if (sub_direct.is_finite()) sub_direct.value += k_sub;
    }
    const LimitVerdict& sub_formula = inf ? out.coeffs.a2 : out.coeffs.a1;
    const LimitVerdict a_sub = sub_formula.is_finite() ? sub_formula : sub_direct;
    out.a1_direct = inf ? dom_direct : sub_direct;
    out.a2_direct = inf ? sub_direct : dom_direct;

    if (!a_dom.is_finite()) {
        out.first_derivative = LimitVerdict::indeterminate("dominant coefficient is not finite");
        out.derivative_pair = out.first_derivative;
    } else {
        const double delta_dom = k_dom - a_dom.value;
        out.first_derivative = limit_or_indeterminate(
            sensitivity_guard([&](double x) { return (rprime(x) + delta_dom * dom * std::pow(x, dom - 1.0)) / std::pow(x, dom - 1.0); },
                              [](double) { return 1.0; }, a_dom.err * std::fabs(dom), cap),
            d, cfg);
        if (!a_sub.is_finite()) {
            out.derivative_pair = LimitVerdict::indeterminate("subdominant coefficient is not finite");
        } else {
            const double delta_sub = k_sub - a_sub.value;
            out.derivative_pair = limit_or_indeterminate(
                sensitivity_guard(
                    [&](double x) {
                        return (rprime(x) + delta_dom * dom * std::pow(x, dom - 1.0) +
                                delta_sub * sub * std::pow(x, sub - 1.0)) /
                               std::pow(x, sub - 1.0);
                    },
                    [&](double x) { return std::fabs(dom) * std::pow(x, dom - sub); }, a_dom.err, cap),
                d, cfg);
        }
    }

    const ScaleContext ctx = power_context(ps, cfg);
    const FactorKind dom_pivot = canonical_factorization(ctx, 1).kind;
    const FactorKind sub_pivot = canonical_factorization(ctx, 2).kind;
    out.pivot_alpha1_type = inf ? dom_pivot : sub_pivot;
    out.pivot_alpha2_type = inf ? sub_pivot : dom_pivot;
    return out;
}

}  // namespace twoterm
