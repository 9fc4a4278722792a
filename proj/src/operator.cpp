#include "twoterm/operator.hpp"

#include <stdexcept>

#include "twoterm/errors.hpp"

namespace twoterm {

namespace {

double apply_jets(const Jet2& a, const Jet2& b, const Jet2& u, double w) {
    const double w1 = a.v * b.d2 - a.d2 * b.v;
    const double v = a.d1 * b.d2 - a.d2 * b.d1;
    return u.d2 - (w1 / w) * u.d1 + (v / w) * u.v;
}

}  // namespace

double apply_L(const ScaleContext& ctx, const Subject& f, double x) {
    if (!f.has_residual) return 0.0;
    const Jet2 u = f.residual_jet(x);
    return apply_jets(ctx.jet1(x), ctx.jet2(x), u, checked_wronskian(ctx, x));
}

double apply_L(const ScaleContext& ctx, const Expr& f, double x) { return apply_L(ctx, split_subject(ctx, f), x); }

OperatorCoefficients operator_coefficients(const ScaleContext& ctx, double x) {
    const Jet2 a = ctx.jet1(x), b = ctx.jet2(x);
    // Solve a1 phi' + a2 phi = -phi'' for both scale functions.
    const double det = a.d1 * b.v - a.v * b.d1;
    if (!(std::fabs(det) >= 1e-300)) throw EvalError(EvalError::Kind::Degenerate, "W", "Wronskian degenerate");
    const double r1 = -a.d2, r2 = -b.d2;
    return {(r1 * b.v - a.v * r2) / det, (a.d1 * r2 - r1 * b.d1) / det};
}

std::string_view factor_kind_name(FactorKind k) {
    switch (k) {
        case FactorKind::TypeI: return "type I";
        case FactorKind::TypeII: return "type II";
        case FactorKind::Indeterminate: return "indeterminate";
    }
    return "?";
}

namespace {

Jet2 pivot_jet(const Factorization& f, double x) { return f.pivot == 1 ? f.ctx.jet1(x) : f.ctx.jet2(x); }

}  // namespace

double Factorization::p0(double x) const { return 1.0 / pivot_jet(*this, x).v; }

double Factorization::p1(double x) const {
    const double p = pivot_jet(*this, x).v;
    return p * p / checked_wronskian(ctx, x);
}

double Factorization::p2(double x) const { return checked_wronskian(ctx, x) / pivot_jet(*this, x).v; }

namespace {

IntegralVerdict reciprocal_p1_verdict(const Factorization& fact, const Domain& d) {
    try {
        return improper_integral([&fact](double x) { return 1.0 / fact.p1(x); }, d.T, d, fact.ctx.cfg);
    } catch (const NumericsError& e) {
        return IntegralVerdict::indeterminate(e.what());
    }
}

FactorKind kind_of(const IntegralVerdict& v) {
    if (v.is_divergent()) return FactorKind::TypeI;
    if (v.is_convergent()) return FactorKind::TypeII;
    return FactorKind::Indeterminate;
}

}  // namespace

FactorKind classify_type(const Factorization& fact, const Domain& d) { return kind_of(reciprocal_p1_verdict(fact, d)); }

Factorization canonical_factorization(const ScaleContext& ctx, int pivot) {
    if (pivot != 1 && pivot != 2) throw std::invalid_argument("pivot must be 1 or 2");
    Factorization f;
    f.ctx = ctx;
    f.pivot = pivot;
    f.reciprocal_p1 = reciprocal_p1_verdict(f, ctx.domain);
    f.kind = kind_of(f.reciprocal_p1);
    return f;
}

double factorized_apply(const Factorization& fact, const Expr& f, double x) {
    const Jet2 phi = pivot_jet(fact, x);
    const auto [w, w1] = fact.ctx.W_jet(x);
    if (!(std::fabs(w) >= 1e-300)) throw EvalError(EvalError::Kind::Degenerate, "W", "Wronskian degenerate");
    const Jet2 q = eval_jet2(f, x) / phi;
    const double p1 = phi.v * phi.v / w;
    const double p1d = (2.0 * phi.v * phi.d1 * w - phi.v * phi.v * w1) / (w * w);
    return (w / phi.v) * (p1d * q.d1 + p1 * q.d2);
}

}  // namespace twoterm
