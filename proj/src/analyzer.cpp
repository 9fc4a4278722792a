#include "twoterm/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "twoterm/errors.hpp"
#include "twoterm/powers.hpp"

namespace twoterm {

std::string_view class_tag_name(ClassTag t) {
    switch (t) {
        case ClassTag::LimitTangent: return "LimitTangent";
        case ClassTag::AsymptoticCurveOnly: return "AsymptoticCurveOnly";
        case ClassTag::FirstOrderOnly: return "FirstOrderOnly";
        case ClassTag::NoExpansion: return "NoExpansion";
        case ClassTag::Indeterminate: return "Indeterminate";
    }
    return "?";
}

std::string_view growth_name(Growth g) {
    switch (g) {
        case Growth::Vanishing: return "vanishing";
        case Growth::Bounded: return "bounded";
        case Growth::Unbounded: return "unbounded";
        case Growth::Indeterminate: return "indeterminate";
    }
    return "?";
}

std::string_view tri_name(Tri t) {
    switch (t) {
        case Tri::Yes: return "yes";
        case Tri::No: return "no";
        case Tri::Unknown: return "unknown";
    }
    return "?";
}

namespace {

struct Series {
    std::vector<double> xs, ys;
};

constexpr int kHorizonRun = 4;

Series sample_series(const Sampler& g, const std::vector<double>& mesh) {
    Series s;
    int run = 0;
    for (double x : mesh) {
        double y = NAN;
        try {
            y = g(x);
        } catch (const EvalError&) {
        }
        if (!std::isfinite(y)) {
            if (++run >= kHorizonRun) break;
            continue;
        }
        run = 0;
        s.xs.push_back(x);
        s.ys.push_back(y);
    }
    return s;
}

Series sample_series(const Sampler& g, const Domain& d, const NumericsConfig& cfg) {
    return sample_series(g, sampling_mesh(d, cfg, d.T));
}

LimitVerdict classify_series(const Series& s, const Domain& d, const NumericsConfig& cfg, double tol,
                             bool* osc = nullptr) {
    if (d.approach == Approach::FromBelow) {
        LimitVerdict v = classify_sequence(s.xs, s.ys, d, cfg, tol, osc);
        if (!s.xs.empty()) v.reach = s.xs.back();
        return v;
    }
    std::vector<double> xs(s.xs.size());
    std::transform(s.xs.begin(), s.xs.end(), xs.begin(), [](double x) { return -x; });
    LimitVerdict v = classify_sequence(xs, s.ys, d.reflected(), cfg, tol, osc);
    if (!s.xs.empty()) v.reach = s.xs.back();
    return v;
}

LimitVerdict shifted(LimitVerdict v, double by) {
    if (v.is_finite()) v.value += by;
    return v;
}

LimitVerdict scaled(LimitVerdict v, double by) {
    if (v.is_finite()) {
        v.value *= by;
        v.err *= std::fabs(by);
    } else if (v.is_definite() && by < 0.0) {
        v.tag = v.tag == LimitVerdict::Tag::PlusInfinity ? LimitVerdict::Tag::MinusInfinity
                                                          : LimitVerdict::Tag::PlusInfinity;
    } else if (v.is_definite() && by == 0.0) {
        v = LimitVerdict::indeterminate("zero times an infinite limit");
    }
    return v;
}

bool agree(const LimitVerdict& a, const LimitVerdict& b, double tol) {
    return std::fabs(a.value - b.value) <= a.err + b.err + tol * (1.0 + std::fabs(a.value));
}

std::string fmt(double v) {
    std::ostringstream o;
    o.precision(6);
    o << v;
    return o.str();
}

std::string tag_word(const LimitVerdict& v) {
    switch (v.tag) {
        case LimitVerdict::Tag::Finite: return "finite";
        case LimitVerdict::Tag::PlusInfinity: return "+inf";
        case LimitVerdict::Tag::MinusInfinity: return "-inf";
        case LimitVerdict::Tag::Indeterminate: return "indeterminate";
    }
    return "?";
}

Subject residual_only(const Subject& f) {
    Subject r = f;
    r.c1 = r.c2 = 0.0;
    return r;
}

/// Oriented distance-like coordinate: grows toward x0.
double toward(const Domain& d, double x) {
    if (d.infinite()) return std::log(x);
    return -std::log(std::fabs(x - d.x0));
}

double from_toward(const Domain& d, double u) {
    if (d.infinite()) return std::exp(u);
    const double side = d.approach == Approach::FromBelow ? -1.0 : 1.0;
    return d.x0 + side * std::exp(-u);
}

/// Scaling of x toward x0 used by regular-variation style quantities.
double rv_scale(const Domain& d, double x) { return d.infinite() ? x : d.x0 - x; }

/// Limit of weight(x) times the tail integral of h from x, along the tail
/// nodes where the weighted quadrature error stays below the limit tolerance.
double phi_at_ref(const Expr& phi, const ScaleContext& ctx) { return eval(phi, ctx.T_ref); }

/// Partial integrals here track contact quantities, so they are judged at
/// the limit tolerance.
NumericsConfig criteria_cfg(const NumericsConfig& cfg) {
    NumericsConfig c = cfg;
    c.quad_tol = std::max(cfg.quad_tol, cfg.limit_tol);
    return c;
}

LimitVerdict weighted_tail_limit(const ScaleContext& ctx, const Sampler& h, const Sampler& weight) {
    const Domain& d = ctx.domain;
    IntegralTails t;
    try {
        t = integral_tails(h, default_mesh_start(d, d.T), d, criteria_cfg(ctx.cfg));
    } catch (const NumericsError& e) {
        return LimitVerdict::indeterminate(std::string("tail integral failed: ") + e.what());
    }
    if (t.tails.empty()) return LimitVerdict::indeterminate("tail integral is not convergent: " + t.total.diagnostic);
    Series s;
    for (std::size_t k = 1; k < t.nodes.size(); ++k) {
        double w = NAN;
        try {
            w = weight(t.nodes[k]);
        } catch (const EvalError&) {
            break;
        }
        const double y = w * t.tails[k];
        const double e = std::fabs(w) * t.errs[k];
        if (!std::isfinite(y) || e > ctx.cfg.limit_tol * (1.0 + std::fabs(y))) break;
        s.xs.push_back(t.nodes[k]);
        s.ys.push_back(y);
    }
    return classify_series(s, d, ctx.cfg, ctx.cfg.limit_tol);
}


}  // namespace

Growth growth_along_mesh(const Sampler& g, const Domain& d, const NumericsConfig& cfg) {
    const Series s = sample_series(g, d, cfg);
    const std::size_t n = s.ys.size();
    if (n < 6) return Growth::Indeterminate;
    const LimitVerdict v = classify_series(s, d, cfg, cfg.limit_tol);
    if (v.is_finite()) return std::fabs(v.value) <= std::max(v.err, cfg.limit_tol) ? Growth::Vanishing : Growth::Bounded;
    if (v.is_definite()) return Growth::Unbounded;

    Series tail = s;
    double b = 0.0;
    for (std::size_t k = n; k-- > 0;) tail.ys[k] = b = std::max(b, std::fabs(s.ys[k]));
    const LimitVerdict tv = classify_series(tail, d, cfg, cfg.limit_tol);
    if (tv.is_finite() && std::fabs(tv.value) <= std::max(tv.err, cfg.limit_tol * tail.ys[0])) return Growth::Vanishing;

    Series sup = s;
    double m = 0.0;
    for (double& y : sup.ys) y = m = std::max(m, std::fabs(y));
    if (m > cfg.divergence_threshold) return Growth::Unbounded;
    const LimitVerdict sv = classify_series(sup, d, cfg, cfg.limit_tol);
    if (sv.is_finite()) return Growth::Bounded;
    if (sv.is_definite()) return Growth::Unbounded;
    const double early = sup.ys[n / 2 - 1], late = sup.ys[n - 1];
    if (late <= early * (1.0 + cfg.limit_tol)) return Growth::Bounded;
    if (late >= 1e2 * early) return Growth::Unbounded;
    return Growth::Indeterminate;
}

// ----------------------------------------------------------- coefficients

A1Estimate estimate_a1(const ScaleContext& ctx, const Subject& f) {
    A1Estimate out;
    const Domain& d = ctx.domain;
    if (!f.has_residual && f.c2 == 0.0) {
        out.quotient = LimitVerdict::finite(f.c1, 0.0);
    } else {
        out.quotient = shifted(limit_or_indeterminate(
                                   [&](double x) {
                                       const double p2 = f.c2 == 0.0 ? 0.0 : f.c2 * eval(ctx.phi2, x);
                                       return (p2 + f.residual_jet(x).v) / eval(ctx.phi1, x);
                                   },
                                   d, ctx.cfg),
                               f.c1);
    }
    if (!f.has_residual) {
        out.contact = LimitVerdict::finite(f.c1, 0.0);
    } else {
        out.contact = limit_or_indeterminate([&](double x) { return f1_star(ctx, f, x); }, d, ctx.cfg);
    }

    const LimitVerdict& q = out.quotient;
    const LimitVerdict& c = out.contact;
    if (q.is_finite() && c.is_finite()) {
        if (agree(q, c, ctx.cfg.limit_tol)) {
            out.combined = q;
            out.combined.err = std::max(q.err, std::fabs(q.value - c.value));
        } else {
            out.combined = LimitVerdict::indeterminate("f/phi1 -> " + fmt(q.value) + " but f1* -> " + fmt(c.value));
        }
    } else if (q.is_definite() && q.tag == c.tag) {
        out.combined = q;
    } else if (!q.is_definite()) {
        out.combined = LimitVerdict::indeterminate("f/phi1: " + q.diagnostic);
    } else if (!c.is_definite()) {
        out.combined = LimitVerdict::indeterminate("f1*: " + c.diagnostic);
    } else {
        out.combined = LimitVerdict::indeterminate("f/phi1 is " + tag_word(q) + " but f1* is " + tag_word(c));
    }
    return out;
}

A2Estimate estimate_a2(const ScaleContext& ctx, const Subject& f, const LimitVerdict& a1) {
    A2Estimate out;
    const Domain& d = ctx.domain;
    const double cap = 0.1 * ctx.cfg.limit_tol;
    if (!a1.is_finite()) {
        out.naive = LimitVerdict::indeterminate("first coefficient is not finite");
    } else {
        const double delta = a1.value - f.c1;
        if (!f.has_residual && delta == 0.0) {
            out.naive = LimitVerdict::finite(f.c2, 0.0);
        } else {
            out.naive = shifted(
                limit_or_indeterminate(
                    sensitivity_guard(
                        [&](double x) {
                            const double p1 = delta == 0.0 ? 0.0 : delta * eval(ctx.phi1, x);
                            return (f.residual_jet(x).v - p1) / eval(ctx.phi2, x);
                        },
                        [&](double x) { return eval(ctx.phi1, x) / eval(ctx.phi2, x); }, a1.err, cap),
                    d, ctx.cfg),
                f.c2);
        }
    }
    if (!f.has_residual) {
        out.geometric = LimitVerdict::finite(f.c2, 0.0);
    } else {
        out.geometric = limit_or_indeterminate([&](double x) { return f2_star(ctx, f, x); }, d, ctx.cfg);
    }
    return out;
}

LimitVerdict asymptotic_mean(const ScaleContext& ctx, const Subject& f) {
    if (!f.has_residual) return LimitVerdict::finite(-f.c2, 0.0);
    const Subject r = residual_only(f);
    const LimitVerdict v = weighted_tail_limit(
        ctx,
        [&](double t) {
            const double p1 = eval(ctx.phi1, t);
            return checked_wronskian(ctx, t) / (p1 * p1) * f2_star(ctx, r, t);
        },
        [&](double x) { return eval(ctx.phi1, x) / eval(ctx.phi2, x); });
    return shifted(v, -f.c2);
}

LimitVerdict indicatrix_mean(const ScaleContext& ctx, const Subject& f) {
    const double p1T = phi_at_ref(ctx.phi1, ctx), p2T = phi_at_ref(ctx.phi2, ctx);
    const double kernel = f.c1 * p1T + f.c2 * p2T;
    if (!f.has_residual) return LimitVerdict::finite(kernel, 0.0);
    const Subject r = residual_only(f);
    const LimitVerdict v = weighted_tail_limit(
        ctx,
        [&](double t) {
            const double P = big_phi(ctx, t);
            return checked_wronskian(ctx, t) / (P * P) * F_star(ctx, r, t);
        },
        [&](double x) { return big_phi(ctx, x) / eval(ctx.phi2, x); });
    return shifted(scaled(v, -p2T), kernel);
}

CriteriaReport integral_criteria(const ScaleContext& ctx, const Subject& f) {
    CriteriaReport c;
    if (!f.has_residual) {
        c.first_coefficient = c.second_coefficient = c.indicatrix = IntegralVerdict::convergent(0.0, 0.0);
        c.iterated = {c.first_coefficient, c.first_coefficient};
        return c;
    }
    const Domain& d = ctx.domain;
    const NumericsConfig cfg = criteria_cfg(ctx.cfg);
    auto L_over_W = [&](double t) { return apply_L(ctx, f, t) / checked_wronskian(ctx, t); };
    const Sampler h2 = [&](double t) { return eval(ctx.phi2, t) * L_over_W(t); };
    c.first_coefficient = integral_or_indeterminate(h2, d.T, d, cfg);
    c.second_coefficient = integral_or_indeterminate([&](double t) { return eval(ctx.phi1, t) * L_over_W(t); }, d.T, d,
                                                     cfg);
    c.indicatrix = integral_or_indeterminate([&](double t) { return big_phi(ctx, t) * L_over_W(t); }, d.T, d, cfg);
    c.iterated = iterated_integral(
        [&](double t) {
            const double p2 = eval(ctx.phi2, t);
            return -ctx.W(t) / (p2 * p2);
        },
        h2, d.T, d, cfg);
    return c;
}

// -------------------------------------------------------------- remainder

double remainder(const ScaleContext& ctx, const Subject& f, double a1, double a2, double x) {
    double R = f.residual_jet(x).v;
    if (f.c1 != a1) R += (f.c1 - a1) * eval(ctx.phi1, x);
    if (f.c2 != a2) R += (f.c2 - a2) * eval(ctx.phi2, x);
    return R;
}

double remainder(const ScaleContext& ctx, const Expr& f, double a1, double a2, double x) {
    return remainder(ctx, split_subject(ctx, f), a1, a2, x);
}

namespace {

constexpr int kTailSamples = 64;
constexpr double kSupInflation = 1.05;

std::vector<double> tail_samples(double x, double reach) {
    std::vector<double> ts{x};
    if (!(std::fabs(reach - x) > 0.0)) return ts;
    const double q = std::pow(1e4, 1.0 / (kTailSamples - 1));
    for (int j = 0; j < kTailSamples; ++j) ts.push_back(x + (reach - x) * std::pow(q, j - (kTailSamples - 1)));
    return ts;
}

std::optional<double> sampled_sup(const Sampler& g, const std::vector<double>& ts) {
    double m = 0.0;
    int ok = 0;
    for (double t : ts) {
        try {
            const double y = g(t);
            if (!std::isfinite(y)) continue;
            m = std::max(m, std::fabs(y));
            ++ok;
        } catch (const EvalError&) {
        }
    }
    if (ok == 0) return std::nullopt;
    return m;
}

/// Integral of |h| over [a, b], split at the sign changes of h so that each
/// piece is smooth.
double abs_interval(const Sampler& h, double a, double b, const NumericsConfig& cfg, double* err) {
    NumericsConfig plain = cfg;
    plain.period_hint.reset();
    std::size_t n = 64;
    if (cfg.period_hint && *cfg.period_hint > 0.0)
        n = static_cast<std::size_t>(std::clamp(16.0 * std::ceil(std::fabs(b - a) / *cfg.period_hint), 16.0, 65536.0));
    double total = 0.0;
    *err = 0.0;
    double left = a, prev_t = a, prev_v = h(a);
    auto piece = [&](double l, double r) {
        double e = 0.0;
        total += std::fabs(integrate_interval(h, l, r, plain, &e));
        *err += e;
    };
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = i == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
        const double v = h(t);
        if ((prev_v < 0.0 && v > 0.0) || (prev_v > 0.0 && v < 0.0)) {
            double lo = prev_t, hi = t, flo = prev_v;
            for (int it = 0; it < 60; ++it) {
                const double m = 0.5 * (lo + hi);
                const double fm = h(m);
                if ((fm < 0.0) == (flo < 0.0)) lo = m, flo = fm;
                else hi = m;
            }
            const double root = 0.5 * (lo + hi);
            piece(left, root);
            left = root;
        }
        prev_t = t;
        prev_v = v;
    }
    piece(left, b);
    return total;
}

/// Tails of the integral of |h| toward x0 at each of the (ordered) xs.
std::vector<RemainderBound> abs_tails(const Sampler& h, const std::vector<double>& xs, const ScaleContext& ctx) {
    std::vector<RemainderBound> out(xs.size());
    if (xs.empty()) return out;
    const NumericsConfig cfg = criteria_cfg(ctx.cfg);
    const Domain& d = ctx.domain;

    PanelSums p;
    p.nodes.push_back(xs.front());
    for (double x : sampling_mesh(d, cfg, xs.front())) {
        double e = 0.0, v = 0.0;
        try {
            v = abs_interval(h, p.nodes.back(), x, cfg, &e);
        } catch (const std::exception& ex) {
            p.stop_reason = ex.what();
            break;
        }
        p.nodes.push_back(x);
        p.panels.push_back(v);
        p.panel_errs.push_back(e);
        p.abs_err += e;
    }
    if (p.panels.size() < 3) return out;
    const IntegralVerdict total = classify_panels(p, d, cfg);
    if (total.is_divergent()) {
        std::fill(out.begin(), out.end(), RemainderBound::infinite());
        return out;
    }
    if (!total.is_convergent()) return out;
    double tail = total.value, err = total.err;
    out[0] = RemainderBound::finite(std::max(tail, 0.0) + err);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        double e = 0.0;
        try {
            tail -= abs_interval(h, xs[i - 1], xs[i], cfg, &e);
        } catch (const std::exception&) {
            break;
        }
        err += e;
        out[i] = RemainderBound::finite(std::max(tail, 0.0) + err);
    }
    return out;
}

std::optional<double> find_xi(const Sampler& g, const std::vector<double>& ts) {
    double pt = NAN, pv = NAN;
    for (double t : ts) {
        double v = NAN;
        try {
            v = g(t);
        } catch (const EvalError&) {
        }
        if (!std::isfinite(v)) continue;
        if (v == 0.0) return t;
        if (std::isfinite(pv) && (pv < 0.0) != (v < 0.0)) {
            double a = pt, b = t, fa = pv;
            for (int it = 0; it < 80; ++it) {
                const double m = 0.5 * (a + b);
                double fm = NAN;
                try {
                    fm = g(m);
                } catch (const EvalError&) {
                }
                if (!std::isfinite(fm)) break;
                if ((fm < 0.0) == (fa < 0.0)) a = m, fa = fm;
                else b = m;
            }
            return 0.5 * (a + b);
        }
        pt = t;
        pv = v;
    }
    return std::nullopt;
}

std::vector<RemainderRow> remainder_rows(const ScaleContext& ctx, const Subject& f, double a1, double a2,
                                         std::optional<double> gamma, const std::vector<double>& xs, double reach,
                                         bool with_bounds) {
    const double p2T = phi_at_ref(ctx.phi2, ctx);
    // Kernel offsets are exact; only the residual part is sampled.
    const Subject r = residual_only(f);
    const double kernel_F = f.c1 * phi_at_ref(ctx.phi1, ctx) + f.c2 * p2T;
    const Sampler dev2 = [&](double t) { return (f.c2 - a2) + f2_star(ctx, r, t); };
    const Sampler devF = [&](double t) { return (kernel_F - *gamma) + F_star(ctx, r, t); };
    auto L_over_W = [&](double t) { return apply_L(ctx, f, t) / checked_wronskian(ctx, t); };

    std::vector<RemainderBound> i527(xs.size()), i528(xs.size());
    if (!with_bounds) {
    } else if (!f.has_residual) {
        std::fill(i527.begin(), i527.end(), RemainderBound::finite(0.0));
        std::fill(i528.begin(), i528.end(), RemainderBound::finite(0.0));
    } else {
        i527 = abs_tails([&](double t) { return eval(ctx.phi1, t) * L_over_W(t); }, xs, ctx);
        if (gamma) i528 = abs_tails([&](double t) { return big_phi(ctx, t) * L_over_W(t); }, xs, ctx);
    }

    std::vector<RemainderRow> rows;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        RemainderRow row;
        row.x = x;
        try {
            row.R = remainder(ctx, f, a1, a2, x);
        } catch (const EvalError&) {
            continue;
        }
        double p2 = NAN;
        try {
            p2 = eval(ctx.phi2, x);
        } catch (const EvalError&) {
            continue;
        }
        if (!with_bounds) {
            rows.push_back(row);
            continue;
        }
        const auto ts = tail_samples(x, reach);
        if (const auto s = sampled_sup(dev2, ts)) row.b_f2star = RemainderBound::finite(kSupInflation * std::fabs(p2) * *s);
        if (gamma) {
            if (const auto s = sampled_sup(devF, ts))
                row.b_Fstar = RemainderBound::finite(kSupInflation * std::fabs(p2 / p2T) * *s);
        }
        auto scale_bound = [](RemainderBound b, double by) {
            if (b.is_finite()) b.value *= by;
            return b;
        };
        row.b_phi1_integral = scale_bound(i527[i], std::fabs(p2));
        row.b_Phi_integral = scale_bound(i528[i], std::fabs(p2 / p2T));
        const double target = row.R / p2;
        if (const auto xi = find_xi([&](double t) { return dev2(t) - target; }, ts)) {
            row.xi_found = true;
            row.xi = *xi;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

RemainderRow remainder_bounds(const ScaleContext& ctx, const Subject& f, double a1, double a2, double gamma, double x,
                              double reach) {
    const auto rows = remainder_rows(ctx, f, a1, a2, gamma, {x}, reach, true);
    if (rows.empty()) throw EvalError(EvalError::Kind::Domain, "R", "remainder cannot be evaluated at x = " + fmt(x));
    return rows.front();
}

// -------------------------------------------------------------- convexity

ConvexityReport convexity_flag(const ScaleContext& ctx, const Subject& f) {
    ConvexityReport c;
    if (!check_ect_signs(ctx)) {
        c.reason = "sign conditions phi1 > 0 and W > 0 do not hold";
        return c;
    }
    int ok = 0;
    for (double x : ctx.grid) {
        double l = NAN;
        try {
            l = apply_L(ctx, f, x);
        } catch (const EvalError&) {
        }
        if (!std::isfinite(l)) continue;
        ++ok;
        if (l < -1e-10) {
            c.convex = Tri::No;
            c.reason = "L[f] = " + fmt(l) + " at x = " + fmt(x);
            return c;
        }
    }
    if (ok == 0) {
        c.reason = "L[f] could not be evaluated on the grid";
        return c;
    }
    c.convex = Tri::Yes;
    c.reason = "L[f] >= -1e-10 at " + std::to_string(ok) + " grid points";
    return c;
}

// ------------------------------------------------------------- tauberian

TauberianReport tauberian_diagnostics(const ScaleContext& ctx, const Subject& f, const ExpansionReport& r) {
    TauberianReport t;
    const Domain& d = ctx.domain;
    const NumericsConfig& cfg = ctx.cfg;

    if (!f.has_residual) {
        t.ratio_cubic = t.ratio_mixed = Growth::Vanishing;
    } else {
        t.ratio_cubic = growth_along_mesh(
            [&](double x) {
                const double p1 = eval(ctx.phi1, x), w = checked_wronskian(ctx, x);
                return apply_L(ctx, f, x) * p1 * p1 * p1 / (w * w);
            },
            d, cfg);
        t.ratio_mixed = growth_along_mesh(
            [&](double x) {
                const double p1 = eval(ctx.phi1, x), p2 = eval(ctx.phi2, x), w = checked_wronskian(ctx, x);
                return apply_L(ctx, f, x) * p1 * p1 * p2 / (w * w);
            },
            d, cfg);
    }

    // phi = phi2/phi1 with phi' = W/phi1^2 and phi'' = (W' phi1 - 2 W phi1')/phi1^3.
    auto ratio_jet = [&](double x) {
        const Jet2 a = ctx.jet1(x), b = ctx.jet2(x);
        const auto [w, wp] = ctx.W_jet(x);
        return Jet2{b.v / a.v, w / (a.v * a.v), (wp * a.v - 2.0 * w * a.d1) / (a.v * a.v * a.v)};
    };
    auto side = [&](double x) { return d.infinite() ? x : x - d.x0; };
    auto comparable = [&](const Sampler& g) {
        const Growth up = growth_along_mesh(g, d, cfg);
        const Growth down = growth_along_mesh([&](double x) { return 1.0 / g(x); }, d, cfg);
        if (up == Growth::Bounded && down == Growth::Bounded) return Tri::Yes;
        if (up == Growth::Indeterminate || down == Growth::Indeterminate) return Tri::Unknown;
        return Tri::No;
    };
    t.comparable_first = comparable([&](double x) {
        const Jet2 q = ratio_jet(x);
        return side(x) * q.d1 / q.v;
    });
    t.comparable_second = comparable([&](double x) {
        const Jet2 q = ratio_jet(x);
        return side(x) * q.d2 / q.d1;
    });

    t.index1 = limit_or_indeterminate(
        [&](double x) {
            const Jet2 a = ctx.jet1(x);
            return rv_scale(d, x) * a.d1 / a.v;
        },
        d, cfg);
    t.index2 = limit_or_indeterminate(
        [&](double x) {
            const Jet2 b = ctx.jet2(x);
            return rv_scale(d, x) * b.d1 / b.v;
        },
        d, cfg);
    t.log_slope = limit_or_indeterminate(
        [&](double x) { return rv_scale(d, x) * ctx.W(x) / (eval(ctx.phi1, x) * eval(ctx.phi2, x)); }, d, cfg);

    const auto p1 = power_exponent(ctx.phi1), p2 = power_exponent(ctx.phi2);
    if (p1 && p2) {
        PowerRatioCheck pr;
        pr.expected = *p2 - *p1;
        std::vector<double> dr, ls;
        for (double x : sampling_mesh(d, cfg, d.T)) {
            try {
                const Jet2 q = ratio_jet(x);
                const double a = q.d1 / std::pow(x, *p2 - *p1 - 1.0), b = x * q.d1 / q.v;
                if (std::isfinite(a) && std::isfinite(b)) dr.push_back(a), ls.push_back(b);
            } catch (const EvalError&) {
            }
        }
        auto stats = [](const std::vector<double>& v, double& mean, double& spread) {
            if (v.empty()) return;
            double s = 0.0;
            for (double y : v) s += y;
            mean = s / static_cast<double>(v.size());
            const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
            spread = *hi - *lo;
        };
        if (!dr.empty()) {
            stats(dr, pr.derivative_mean, pr.derivative_spread);
            stats(ls, pr.log_slope_mean, pr.log_slope_spread);
            t.power_ratio = pr;
        }
    }

    t.derivative_ratio = limit_or_indeterminate(
        [&](double x) { return ctx.jet2(x).d1 / ctx.jet1(x).d1; }, d, cfg);
    const bool small_ratio = t.derivative_ratio.is_finite() &&
                             std::fabs(t.derivative_ratio.value) <= std::max(t.derivative_ratio.err, cfg.limit_tol);
    if (!small_ratio) {
        t.standard_derivative = "not applicable: phi2' = o(phi1') not established";
    } else if (!t.index1.is_finite() || !t.index2.is_finite()) {
        t.standard_derivative = "not applicable: phi1, phi2 not regularly varying in the strong sense";
    } else if (std::fabs(t.index2.value) <= std::max(t.index2.err, cfg.limit_tol)) {
        t.standard_derivative = "not applicable (alpha2 = 0)";
    } else if (!(t.index1.value > t.index2.value)) {
        t.standard_derivative = "not applicable: indexes not ordered alpha1 > alpha2";
    } else if (r.classification.tag != ClassTag::LimitTangent || !r.a1.is_finite() || !r.a2.is_finite()) {
        t.standard_derivative = "applicable; limit tangent curve not established, no verdict";
    } else {
        const double a1 = r.a1.value, a2 = r.a2.value;
        t.standard_derivative_limit = limit_or_indeterminate(
            sensitivity_guard(
                [&](double x) {
                    const Jet2 j1 = ctx.jet1(x), j2 = ctx.jet2(x);
                    const double num = f.residual_jet(x).d1 + (f.c1 - a1) * j1.d1 + (f.c2 - a2) * j2.d1;
                    return num / j2.d1;
                },
                [&](double x) { return ctx.jet1(x).d1 / ctx.jet2(x).d1; }, r.a1.err, 0.1 * cfg.limit_tol),
            d, cfg);
        const LimitVerdict& s = t.standard_derivative_limit;
        if (s.is_finite() && std::fabs(s.value) <= std::max(s.err, cfg.limit_tol))
            t.standard_derivative = "holds: f' = a1 phi1' + a2 phi2' + o(phi2')";
        else if (s.is_definite())
            t.standard_derivative = "fails: derivative remainder over phi2' does not vanish";
        else
            t.standard_derivative = "indeterminate: " + s.diagnostic;
    }

    if (t.ratio_mixed == Growth::Vanishing) {
        t.note = "mixed ratio vanishes: the second expansion follows";
    } else if (t.ratio_mixed == Growth::Bounded) {
        if (t.comparable_first == Tri::Yes && t.comparable_second == Tri::Yes)
            t.note = "mixed ratio bounded with comparable derivatives: the second expansion follows";
        else if (t.comparable_first == Tri::No || t.comparable_second == Tri::No)
            t.note = "conjecture region, no verdict";
        else
            t.note = "mixed ratio bounded; comparability undetermined";
    } else if (t.ratio_mixed == Growth::Unbounded) {
        t.note = "mixed ratio unbounded: the growth condition fails";
    } else {
        t.note = "mixed ratio indeterminate";
    }
    return t;
}

// ----------------------------------------------------------------- driver

namespace {

Classification decide(const ExpansionReport& r, double tol) {
    const LimitVerdict& geo = r.a2_detail.geometric;
    const LimitVerdict& naive = r.a2_detail.naive;
    const LimitVerdict& a1 = r.a1;
    auto make = [](ClassTag tag, std::string blocking, std::string summary) {
        return Classification{tag, std::move(blocking), std::move(summary)};
    };
    auto indet = [&](std::string blocking, std::string why) {
        return make(ClassTag::Indeterminate, std::move(blocking), std::move(why));
    };

    if (geo.is_finite()) {
        if (!a1.is_finite()) return indet("first coefficient", "f2* converges but a1 is " + tag_word(a1) + ": " + a1.diagnostic);
        if (naive.is_definite() && !naive.is_finite())
            return indet("naive second coefficient", "f2* converges but (f - a1 phi1)/phi2 is " + tag_word(naive));
        if (naive.is_finite() && !agree(naive, geo, tol))
            return indet("second coefficient", "naive a2 = " + fmt(naive.value) + " but f2* -> " + fmt(geo.value));
        if (!r.gamma.is_finite()) return indet("limit of F*", "F* is " + tag_word(r.gamma) + ": " + r.gamma.diagnostic);
        if (!r.gamma_identity) return indet("gamma identity", "gamma differs from phi1(T) a1 + phi2(T) a2");
        return make(ClassTag::LimitTangent, "limit of f2*", "f has a limit tangent curve");
    }
    if (!geo.is_definite()) return indet("limit of f2*", geo.diagnostic);

    const LimitVerdict& mean = r.asymptotic_mean;
    if (mean.is_finite()) {
        if (!r.a1_detail.quotient.is_finite())
            return indet("first coefficient", "asymptotic mean converges but f/phi1 is " + tag_word(r.a1_detail.quotient));
        if (naive.is_definite() && !naive.is_finite())
            return indet("naive second coefficient", "asymptotic mean converges but (f - a1 phi1)/phi2 is " + tag_word(naive));
        return make(ClassTag::AsymptoticCurveOnly, "limit of f2*",
                    "two-term expansion holds (asymptotic curve) but f2* -> " + tag_word(geo));
    }
    if (!mean.is_definite()) return indet("asymptotic mean", mean.diagnostic);

    const LimitVerdict& contact = r.a1_detail.contact;
    if (contact.is_finite())
        return make(ClassTag::FirstOrderOnly, "limit of f2*",
                    "first-order expansion only: f2* -> " + tag_word(geo) + ", asymptotic mean -> " + tag_word(mean));
    if (!contact.is_definite()) return indet("limit of f1*", contact.diagnostic);
    return make(ClassTag::NoExpansion, "limit of f1*", "f1* -> " + tag_word(contact));
}

/// Largest mesh point within the reach of the limit verdicts at which the
/// coefficient uncertainty stays below 1e-3 |phi2|.
std::optional<double> table_reach(const ScaleContext& ctx, const ExpansionReport& r) {
    const Domain& d = ctx.domain;
    const double lim = r.a2.reach;
    std::optional<double> best;
    for (double x : sampling_mesh(d, ctx.cfg, d.T)) {
        if (std::isfinite(lim) && toward(d, x) > toward(d, lim)) break;
        try {
            const double p1 = eval(ctx.phi1, x), p2 = eval(ctx.phi2, x);
            const double u = std::fabs(p1) * r.a1.err + std::fabs(p2) * r.a2.err;
            if (!std::isfinite(u) || u > 1e-3 * std::fabs(p2)) break;
            best = x;
        } catch (const EvalError&) {
            break;
        }
    }
    return best;
}

}  // namespace

ExpansionReport analyze(const ScaleContext& ctx, const Expr& expr, const AnalyzeOptions& opt) {
    ExpansionReport r;
    const Subject f = split_subject(ctx, expr);
    const Domain& d = ctx.domain;
    const NumericsConfig& cfg = ctx.cfg;

    r.a1_detail = estimate_a1(ctx, f);
    r.a1 = r.a1_detail.combined;
    const LimitVerdict& a1_src = r.a1.is_finite() ? r.a1 : r.a1_detail.quotient;
    r.a2_detail = estimate_a2(ctx, f, a1_src);
    r.a2 = r.a2_detail.geometric.is_finite() ? r.a2_detail.geometric : r.a2_detail.naive;

    if (!f.has_residual) {
        r.gamma = LimitVerdict::finite(f.c1 * phi_at_ref(ctx.phi1, ctx) + f.c2 * phi_at_ref(ctx.phi2, ctx), 0.0);
    } else {
        r.gamma = limit_or_indeterminate([&](double x) { return F_star(ctx, f, x); }, d, cfg);
    }
    if (r.a1.is_finite() && r.a2.is_finite() && r.gamma.is_finite()) {
        const double p1T = phi_at_ref(ctx.phi1, ctx), p2T = phi_at_ref(ctx.phi2, ctx);
        const double res = r.gamma.value - p1T * r.a1.value - p2T * r.a2.value;
        const double bar = r.gamma.err + std::fabs(p1T) * r.a1.err + std::fabs(p2T) * r.a2.err +
                           cfg.limit_tol * (1.0 + std::fabs(r.gamma.value));
        r.gamma_residual = std::make_pair(res, bar);
        r.gamma_identity = std::fabs(res) <= bar;
    }

    r.asymptotic_mean = asymptotic_mean(ctx, f);
    r.indicatrix_mean = indicatrix_mean(ctx, f);
    r.criteria = integral_criteria(ctx, f);
    r.classification = decide(r, cfg.limit_tol);

    if (opt.convexity) {
        r.convexity = convexity_flag(ctx, f);
        if (r.convexity.convex == Tri::Yes) {
            ConvexityReport& c = r.convexity;
            std::optional<double> prev;
            c.f2star_nondecreasing = Tri::Yes;
            std::vector<double> xs = ctx.grid;
            std::sort(xs.begin(), xs.end());
            for (double x : xs) {
                double v = NAN;
                try {
                    v = f2_star(ctx, f, x);
                } catch (const EvalError&) {
                }
                if (!std::isfinite(v)) continue;
                if (prev && v < *prev - 1e-9 * (1.0 + std::fabs(*prev))) c.f2star_nondecreasing = Tri::No;
                prev = v;
            }
            if (!prev) c.f2star_nondecreasing = Tri::Unknown;

            const LimitVerdict& q = r.a1_detail.quotient;
            const LimitVerdict& k = r.a1_detail.contact;
            if (q.is_finite()) c.first_order_inference = k.is_finite() && agree(q, k, cfg.limit_tol) ? Tri::Yes : Tri::No;
            if (!k.is_definite() && q.is_finite()) c.first_order_inference = Tri::Unknown;

            if (r.a2_detail.naive.is_finite()) {
                c.naive_quotient_bounded = Tri::Yes;
            } else if (a1_src.is_finite()) {
                const double delta = a1_src.value - f.c1;
                const Growth g = growth_along_mesh(
                    sensitivity_guard(
                        [&](double x) { return (f.residual_jet(x).v - delta * eval(ctx.phi1, x)) / eval(ctx.phi2, x); },
                        [&](double x) { return eval(ctx.phi1, x) / eval(ctx.phi2, x); }, a1_src.err,
                        0.1 * cfg.limit_tol),
                    d, cfg);
                c.naive_quotient_bounded = g == Growth::Bounded || g == Growth::Vanishing ? Tri::Yes
                                           : g == Growth::Unbounded                      ? Tri::No
                                                                                         : Tri::Unknown;
            }
            const bool geo_infinite = r.a2_detail.geometric.is_definite() && !r.a2_detail.geometric.is_finite();
            if (r.classification.tag == ClassTag::Indeterminate && c.naive_quotient_bounded == Tri::Yes &&
                a1_src.is_finite() && r.a2_detail.naive.is_finite() && !geo_infinite) {
                r.classification = {ClassTag::LimitTangent, "convexity",
                                    "f has a limit tangent curve (convex f with bounded (f - a1 phi1)/phi2)"};
                r.a1 = a1_src;
                r.a2 = r.a2_detail.naive;
                c.upgraded = true;
            }
        }
    }

    if (r.a1.is_finite() && r.a2.is_finite()) {
        if (const auto reach = table_reach(ctx, r)) {
            const double s0 = default_mesh_start(d, d.T);
            const double u0 = toward(d, s0), u1 = toward(d, *reach);
            std::vector<double> xs;
            if (u1 > u0) {
                for (int i = 0; i < 16; ++i) xs.push_back(from_toward(d, u0 + (u1 - u0) * i / 15.0));
                xs.back() = *reach;
            }
            const bool lt = r.classification.tag == ClassTag::LimitTangent;
            const std::optional<double> gamma =
                lt && r.gamma.is_finite() ? std::optional<double>(r.gamma.value) : std::nullopt;
            r.remainder_table = remainder_rows(ctx, f, r.a1.value, r.a2.value, gamma, xs, *reach, lt);
        }
    }

    if (opt.tauberian) r.tauberian = tauberian_diagnostics(ctx, f, r);
    return r;
}

}  // namespace twoterm
