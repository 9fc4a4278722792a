#include "twoterm/scale.hpp"

#include <cmath>
#include <sstream>

#include "twoterm/errors.hpp"

namespace twoterm {

std::string_view clause_name(ScaleClause c) {
    switch (c) {
        case ScaleClause::Evaluation: return "evaluation";
        case ScaleClause::Growth: return "growth";
        case ScaleClause::Nonvanishing: return "nonvanishing";
        case ScaleClause::Wronskian: return "wronskian";
    }
    return "?";
}

double wronskian(const Expr& f, const Expr& g, double x) {
    const Jet2 a = eval_jet2(f, x);
    const Jet2 b = eval_jet2(g, x);
    return a.v * b.d1 - a.d1 * b.v;
}

double ScaleContext::W(double x) const { return W_jet(x).first; }

std::pair<double, double> ScaleContext::W_jet(double x) const {
    const Jet2 a = jet1(x);
    const Jet2 b = jet2(x);
    return {a.v * b.d1 - a.d1 * b.v, a.v * b.d2 - a.d2 * b.v};
}

std::vector<double> validation_grid(const Domain& d, int n) {
    d.validate();
    if (n < 3) throw std::invalid_argument("validation grid needs at least 3 points");
    std::vector<double> g{d.T};
    if (d.infinite()) {
        const double scale = std::max(1.0, std::fabs(d.T));
        const double first = 1e-3 * scale, span = 1e12 * scale;
        const double q = std::pow(span / first, 1.0 / (n - 2));
        for (int i = 1; i < n; ++i) g.push_back(d.T + span * std::pow(q, i - (n - 1)));
        return g;
    }
    const double gap = std::fabs(d.x0 - d.T);
    const double side = d.approach == Approach::FromBelow ? -1.0 : 1.0;
    const double rho = std::pow(1e-12, 1.0 / (n - 1));
    for (int i = 1; i < n; ++i) {
        const double x = d.x0 + side * gap * std::pow(rho, i);
        if (std::fabs(x - d.x0) >= std::fabs(g.back() - d.x0) || x == d.x0) break;
        g.push_back(x);
    }
    return g;
}

namespace {

std::string at(double x) {
    std::ostringstream o;
    o.precision(10);
    o << " at x = " << x;
    return o.str();
}

int sign_of(double v) { return v > 0 ? 1 : -1; }

}  // namespace

ScaleContext validate_scale(const Expr& phi1, const Expr& phi2, const Domain& d, const NumericsConfig& cfg,
                            std::optional<double> T_ref) {
    d.validate();
    ScaleContext ctx;
    ctx.phi1 = phi1;
    ctx.phi2 = phi2;
    ctx.domain = d;
    ctx.cfg = cfg;
    ctx.T_ref = T_ref.value_or(d.T);
    if (!d.contains(ctx.T_ref)) throw std::invalid_argument("reference line T must lie in the domain");

    struct Row {
        double x;
        Jet2 a, b;
        double w;
    };
    std::vector<Row> rows;
    double failed_at = std::numeric_limits<double>::quiet_NaN();
    std::string failure;
    for (double x : validation_grid(d, cfg.grid_size)) {
        try {
            const Jet2 a = ctx.jet1(x), b = ctx.jet2(x);
            const double w = a.v * b.d1 - a.d1 * b.v;
            if (!a.finite() || !b.finite() || !std::isfinite(w))
                throw EvalError(EvalError::Kind::NonFinite, "W", "non-finite scale value");
            rows.push_back({x, a, b, w});
        } catch (const EvalError& e) {
            failed_at = x;
            failure = e.what();
            break;
        }
    }
    if (rows.size() < 16)
        throw ScaleInvalid(ScaleClause::Evaluation, failed_at,
                           "scale cannot be evaluated on enough of the domain: " + failure);
    for (const auto& r : rows) ctx.grid.push_back(r.x);

    ctx.sign_phi1 = sign_of(rows[0].a.v);
    ctx.sign_phi2 = sign_of(rows[0].b.v);
    ctx.sign_W = sign_of(rows[0].w);
    for (const auto& r : rows) {
        if (r.a.v == 0.0 || sign_of(r.a.v) != ctx.sign_phi1)
            throw ScaleInvalid(ScaleClause::Nonvanishing, r.x, "phi1 vanishes or changes sign" + at(r.x));
        if (r.b.v == 0.0 || sign_of(r.b.v) != ctx.sign_phi2)
            throw ScaleInvalid(ScaleClause::Nonvanishing, r.x, "phi2 vanishes or changes sign" + at(r.x));
    }
    if (eval(phi1, ctx.T_ref) == 0.0 || eval(phi2, ctx.T_ref) == 0.0)
        throw ScaleInvalid(ScaleClause::Nonvanishing, ctx.T_ref,
                           "a scale function vanishes on the reference line" + at(ctx.T_ref));
    for (const auto& r : rows) {
        const double size = std::fabs(r.a.v * r.b.d1) + std::fabs(r.a.d1 * r.b.v);
        if (std::fabs(r.w) <= 1e-14 * size || r.w == 0.0)
            throw ScaleInvalid(ScaleClause::Wronskian, r.x, "Wronskian vanishes" + at(r.x));
        if (sign_of(r.w) != ctx.sign_W)
            throw ScaleInvalid(ScaleClause::Wronskian, r.x, "Wronskian changes sign" + at(r.x));
    }

    try {
        ctx.growth_verdict = limit_at_boundary([&](double x) { return eval(phi2, x) / eval(phi1, x); }, d, cfg);
    } catch (const NumericsError& e) {
        throw ScaleInvalid(ScaleClause::Evaluation, rows.back().x, std::string("phi2/phi1 cannot be sampled: ") + e.what());
    }
    const auto& g = ctx.growth_verdict;
    if (!g.is_finite() || std::fabs(g.value) > std::max(g.err, cfg.limit_tol)) {
        std::ostringstream o;
        o << "phi2/phi1 does not tend to 0 at the boundary";
        if (g.is_finite()) o << " (limit " << g.value << ")";
        else if (!g.diagnostic.empty()) o << " (" << g.diagnostic << ")";
        throw ScaleInvalid(ScaleClause::Growth, std::isnan(g.reach) ? rows.back().x : g.reach, o.str());
    }
    return ctx;
}

bool check_ect_signs(const ScaleContext& ctx) { return ctx.sign_phi1 == 1 && ctx.sign_W == 1; }

}  // namespace twoterm
