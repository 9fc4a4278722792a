#include "twoterm/contact.hpp"

#include <cmath>

#include "twoterm/errors.hpp"

namespace twoterm {

namespace {

std::optional<Term> single_term(const Expr& e) {
    auto terms = additive_terms(e);
    if (terms.size() != 1) return std::nullopt;
    return terms.front();
}

double wr(const Jet2& a, const Jet2& b) { return a.v * b.d1 - a.d1 * b.v; }

}  // namespace

Subject split_subject(const ScaleContext& ctx, const Expr& f) {
    Subject s;
    s.f = f;
    const auto p1 = single_term(ctx.phi1);
    const auto p2 = single_term(ctx.phi2);
    Expr rest;
    bool any = false;
    for (const Term& t : additive_terms(f)) {
        if (p1 && t.core == p1->core) {
            s.c1 += t.weight / p1->weight;
        } else if (p2 && t.core == p2->core) {
            s.c2 += t.weight / p2->weight;
        } else {
            const Expr term = t.weight == 1.0 ? t.core : Expr::constant(t.weight) * t.core;
            rest = any ? rest + term : term;
            any = true;
        }
    }
    s.residual = rest;
    s.has_residual = any;
    return s;
}

Jet2 Subject::jet(const ScaleContext& ctx, double x) const {
    Jet2 j = residual_jet(x);
    if (c1 != 0.0) j = j + c1 * ctx.jet1(x);
    if (c2 != 0.0) j = j + c2 * ctx.jet2(x);
    return j;
}

double checked_wronskian(const ScaleContext& ctx, double t) {
    const double w = ctx.W(t);
    if (!(std::fabs(w) >= 1e-300))
        throw EvalError(EvalError::Kind::Degenerate, "W", "Wronskian degenerate at x = " + std::to_string(t));
    return w;
}

double f1_star(const ScaleContext& ctx, const Subject& f, double t) {
    if (!f.has_residual) return f.c1;
    const Jet2 r = f.residual_jet(t);
    return f.c1 + wr(r, ctx.jet2(t)) / checked_wronskian(ctx, t);
}

double f2_star(const ScaleContext& ctx, const Subject& f, double t) {
    if (!f.has_residual) return f.c2;
    const Jet2 r = f.residual_jet(t);
    return f.c2 - wr(r, ctx.jet1(t)) / checked_wronskian(ctx, t);
}

Jet2 big_phi_jet(const ScaleContext& ctx, double x) {
    const double p1T = eval(ctx.phi1, ctx.T_ref), p2T = eval(ctx.phi2, ctx.T_ref);
    return p2T * ctx.jet1(x) - p1T * ctx.jet2(x);
}

double big_phi(const ScaleContext& ctx, double x) { return big_phi_jet(ctx, x).v; }

double F_star(const ScaleContext& ctx, const Subject& f, double t) {
    const double p1T = eval(ctx.phi1, ctx.T_ref), p2T = eval(ctx.phi2, ctx.T_ref);
    const double kernel = f.c1 * p1T + f.c2 * p2T;
    if (!f.has_residual) return kernel;
    const Jet2 r = f.residual_jet(t);
    return kernel + wr(big_phi_jet(ctx, t), r) / checked_wronskian(ctx, t);
}

ContactPoint contact_point(const ScaleContext& ctx, const Subject& f, double t) {
    return {t, f1_star(ctx, f, t), f2_star(ctx, f, t), F_star(ctx, f, t)};
}

double f1_star(const ScaleContext& ctx, const Expr& f, double t) { return f1_star(ctx, split_subject(ctx, f), t); }
double f2_star(const ScaleContext& ctx, const Expr& f, double t) { return f2_star(ctx, split_subject(ctx, f), t); }
double F_star(const ScaleContext& ctx, const Expr& f, double t) { return F_star(ctx, split_subject(ctx, f), t); }
ContactPoint contact_point(const ScaleContext& ctx, const Expr& f, double t) {
    return contact_point(ctx, split_subject(ctx, f), t);
}

std::pair<double, double> osculating_coeffs(const ScaleContext& ctx, const Expr& f, double t0) {
    const Subject s = split_subject(ctx, f);
    return {f1_star(ctx, s, t0), f2_star(ctx, s, t0)};
}

}  // namespace twoterm
