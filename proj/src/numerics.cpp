#include "twoterm/numerics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "twoterm/errors.hpp"

namespace twoterm {

void Domain::validate() const {
    if (!std::isfinite(T)) throw std::invalid_argument("domain anchor T must be finite");
    if (std::isnan(x0) || x0 == -std::numeric_limits<double>::infinity())
        throw std::invalid_argument("boundary x0 must be a real number or +inf");
    if (approach == Approach::FromBelow) {
        if (!(T < x0)) throw std::invalid_argument("from-below domain needs T < x0");
    } else {
        if (infinite()) throw std::invalid_argument("from-above domain needs a finite x0");
        if (!(T > x0)) throw std::invalid_argument("from-above domain needs T > x0");
    }
}

bool Domain::contains(double x) const {
    if (approach == Approach::FromBelow) return T <= x && x < x0;
    return x0 < x && x <= T;
}

Domain Domain::reflected() const {
    if (approach == Approach::FromBelow) return *this;
    return {-T, -x0, Approach::FromBelow};
}

std::vector<double> boundary_mesh(const Domain& d, double T0, double ratio, int count) {
    d.validate();
    if (!(ratio > 1.0) || !std::isfinite(ratio)) throw std::invalid_argument("mesh ratio must exceed 1");
    if (count < 1) throw std::invalid_argument("mesh count must be positive");
    const bool inside = d.approach == Approach::FromBelow ? (d.T < T0 && T0 < d.x0) : (d.x0 < T0 && T0 < d.T);
    if (!inside) throw std::invalid_argument("mesh start must lie strictly between T and x0");
    std::vector<double> mesh;
    mesh.reserve(static_cast<std::size_t>(count));
    if (d.infinite()) {
        if (!(T0 > 0.0)) throw std::invalid_argument("a geometric mesh toward +inf needs a positive start");
        double x = T0;
        for (int k = 0; k < count && std::isfinite(x); ++k, x *= ratio) mesh.push_back(x);
        return mesh;
    }
    const double gap = std::fabs(d.x0 - T0);
    const double side = d.approach == Approach::FromBelow ? -1.0 : 1.0;
    for (int k = 0; k < count; ++k) {
        const double x = d.x0 + side * gap * std::pow(ratio, -k);
        if (!mesh.empty() && !(std::fabs(x - d.x0) < std::fabs(mesh.back() - d.x0))) break;
        if (std::fabs(x - d.x0) < 1e-12 * std::fabs(d.x0)) break;
        mesh.push_back(x);
    }
    return mesh;
}

double default_mesh_start(const Domain& d, double from) {
    if (d.infinite()) return from > 0.0 ? std::max(2.0 * from, from + 1.0) : 1.0;
    return 0.5 * (from + d.x0);
}

std::vector<double> sampling_mesh(const Domain& d, const NumericsConfig& cfg, double from) {
    double T0 = default_mesh_start(d, from);
    const bool snap = d.infinite() && cfg.period_hint && *cfg.period_hint > 0.0;
    if (!snap) return boundary_mesh(d, T0, cfg.mesh_ratio, cfg.mesh_count);

    const double P = *cfg.period_hint;
    T0 = P * std::ceil(T0 / P);
    if (T0 <= from) T0 += P;
    auto mesh = boundary_mesh(d, T0, cfg.mesh_ratio, cfg.mesh_count);
    if (cfg.mesh_ratio != std::nearbyint(cfg.mesh_ratio)) {
        std::vector<double> snapped;
        for (double x : mesh) {
            const double s = P * std::nearbyint(x / P);
            if (snapped.empty() || s > snapped.back()) snapped.push_back(s);
        }
        mesh = std::move(snapped);
    }
    return mesh;
}

// ---------------------------------------------------------------- sampling

namespace {

struct Samples {
    std::vector<double> xs, ys;
    std::string horizon;
};

constexpr int kHorizonRun = 4;

Samples sample_mesh(const Sampler& g, const std::vector<double>& mesh) {
    Samples s;
    int interior_failures = 0;
    int run = 0;
    std::string first_error;
    for (double x : mesh) {
        std::string why;
        double y = std::numeric_limits<double>::quiet_NaN();
        try {
            y = g(x);
            if (!std::isfinite(y)) why = "non-finite value";
        } catch (const EvalError& e) {
            why = e.what();
        }
        if (why.empty()) {
            interior_failures += run;
            run = 0;
            s.xs.push_back(x);
            s.ys.push_back(y);
            continue;
        }
        if (first_error.empty()) first_error = why;
        if (++run >= kHorizonRun) {
            s.horizon = why;
            break;
        }
    }
    if (run > 0 && s.horizon.empty()) s.horizon = first_error;
    if (s.xs.empty()) throw NumericsError("sampled function failed on every mesh point: " + first_error);
    const int attempted = static_cast<int>(s.xs.size()) + interior_failures;
    if (2 * interior_failures > attempted)
        throw NumericsError("sampled function failed on more than half of the mesh: " + first_error);
    return s;
}

}  // namespace

LimitVerdict limit_at_boundary(const Sampler& g, const Domain& d, double tol) {
    NumericsConfig cfg;
    cfg.limit_tol = tol;
    return limit_at_boundary(g, d, cfg);
}

LimitVerdict limit_at_boundary(const Sampler& g, const Domain& d, const NumericsConfig& cfg) {
    d.validate();
    if (!(cfg.limit_tol > 0.0)) throw std::invalid_argument("limit tolerance must be positive");
    if (d.approach == Approach::FromAbove) {
        LimitVerdict v = limit_at_boundary([&g](double u) { return g(-u); }, d.reflected(), cfg);
        v.reach = -v.reach;
        return v;
    }
    auto classify_on = [&](const Samples& s) {
        LimitVerdict v = classify_sequence(s.xs, s.ys, d, cfg, cfg.limit_tol);
        v.reach = s.xs.empty() ? d.T : s.xs.back();
        if (!v.is_definite() && !s.horizon.empty()) v.diagnostic += "; sampling stopped: " + s.horizon;
        return v;
    };
    const std::vector<double> mesh = sampling_mesh(d, cfg, d.T);
    LimitVerdict v = classify_on(sample_mesh(g, mesh));
    if (!d.infinite() || !cfg.period_hint || !v.is_definite()) return v;

    // Period multiples see a single phase of an oscillation with the hinted
    // period; two further phases must agree with it.
    const double P = *cfg.period_hint;
    for (double frac : {1.0 / 3.0, 2.0 / 3.0}) {
        std::vector<double> shifted;
        for (double x : mesh) shifted.push_back(x + frac * P);
        Samples s;
        try {
            s = sample_mesh(g, shifted);
        } catch (const NumericsError& e) {
            return LimitVerdict::indeterminate(std::string("off the period multiples: ") + e.what());
        }
        const LimitVerdict w = classify_on(s);
        if (w.is_definite() && w.tag != v.tag)
            return LimitVerdict::indeterminate("the verdict depends on the phase within the hinted period");
        if (!v.is_finite()) {
            if (!w.is_definite()) return LimitVerdict::indeterminate("off the period multiples: " + w.diagnostic);
            continue;
        }
        if (w.is_finite()) {
            const double gap = std::fabs(v.value - w.value);
            if (gap > v.err + w.err + cfg.limit_tol * (1.0 + std::fabs(v.value)))
                return LimitVerdict::indeterminate("the limit depends on the phase within the hinted period (" +
                                                   std::to_string(v.value) + " vs " + std::to_string(w.value) + ")");
            v.err = std::max({v.err, w.err, gap});
            continue;
        }
        // Slowly decaying oscillation: accept when the deviations from the
        // phase-0 limit shrink, with the recent deviation as the error.
        const std::size_t n = s.ys.size();
        if (n < 4) return LimitVerdict::indeterminate("off the period multiples: " + w.diagnostic);
        const std::size_t third = n / 3;
        double early = 0.0, late = 0.0;
        for (std::size_t i = 0; i < third; ++i) early = std::max(early, std::fabs(s.ys[i] - v.value));
        for (std::size_t i = n - third; i < n; ++i) late = std::max(late, std::fabs(s.ys[i] - v.value));
        if (!(late < 0.5 * early)) return LimitVerdict::indeterminate("off the period multiples: " + w.diagnostic);
        v.err = std::max(v.err, late);
    }
    return v;
}

LimitVerdict limit_or_indeterminate(const Sampler& g, const Domain& d, const NumericsConfig& cfg) {
    try {
        return limit_at_boundary(g, d, cfg);
    } catch (const NumericsError& e) {
        return LimitVerdict::indeterminate(e.what());
    }
}

Sampler sensitivity_guard(Sampler g, Sampler amplification, double err, double cap) {
    return [g = std::move(g), amp = std::move(amplification), err, cap](double x) {
        if (err > 0.0 && std::fabs(amp(x)) * err > cap)
            throw EvalError(EvalError::Kind::Precision, "coefficient", "coefficient uncertainty dominates the sample");
        return g(x);
    };
}

// -------------------------------------------------------------- quadrature

namespace {

double gk_piece(const Sampler& h, double a, double b, double rel_tol, unsigned depth, double* err, double* l1) {
    auto f = [&h](double t) {
        const double y = h(t);
        if (!std::isfinite(y)) throw EvalError(EvalError::Kind::NonFinite, "integrand", "non-finite integrand sample");
        return y;
    };
    double e = 0.0, l = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, depth, rel_tol, &e, &l);
    *err = e;
    *l1 = l;
    return v;
}

}  // namespace

double integrate_interval(const Sampler& h, double a, double b, const NumericsConfig& cfg, double* abs_err,
                          double* l1) {
    double dummy = 0.0, dummy_l1 = 0.0;
    if (!abs_err) abs_err = &dummy;
    if (!l1) l1 = &dummy_l1;
    *abs_err = 0.0;
    *l1 = 0.0;
    if (a == b) return 0.0;
    if (a > b) return -integrate_interval(h, b, a, cfg, abs_err, l1);
    const double rel_tol = cfg.quad_tol / 10.0;
    std::size_t pieces = 1;
    unsigned depth = 10;
    if (cfg.period_hint && *cfg.period_hint > 0.0) {
        const double n = std::ceil((b - a) / *cfg.period_hint);
        if (n > 16384.0) throw NumericsError("interval spans more than 16384 periods");
        pieces = static_cast<std::size_t>(std::max(1.0, n));
        depth = 6;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < pieces; ++i) {
        const double l = a + (b - a) * static_cast<double>(i) / static_cast<double>(pieces);
        const double r = i + 1 == pieces ? b : a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(pieces);
        double e = 0.0, m = 0.0;
        total += gk_piece(h, l, r, rel_tol, depth, &e, &m);
        *abs_err += e;
        *l1 += m;
    }
    return total;
}

namespace {

constexpr std::size_t kMinPanels = 3;
constexpr double kUnresolved = 1e-4;

PanelSums panels_below(const Sampler& h, double from, const Domain& d, const NumericsConfig& cfg) {
    PanelSums p;
    const auto mesh = sampling_mesh(d, cfg, from);
    p.nodes.push_back(from);
    for (double x : mesh) {
        const double a = p.nodes.back();
        double e = 0.0, l1 = 0.0;
        double v = 0.0;
        try {
            v = integrate_interval(h, a, x, cfg, &e, &l1);
            if (e > kUnresolved * l1)
                throw NumericsError("quadrature unresolved on the panel (oscillation finer than the rule)");
        } catch (const std::exception& ex) {
            if (p.panels.size() < kMinPanels) {
                std::ostringstream msg;
                msg.precision(10);
                msg << "quadrature failure on panel [" << a << ", " << x << "]: " << ex.what();
                throw NumericsError(msg.str());
            }
            p.stop_reason = ex.what();
            break;
        }
        p.nodes.push_back(x);
        p.panels.push_back(v);
        p.panel_errs.push_back(e);
        p.abs_err += e;
    }
    return p;
}

}  // namespace

PanelSums integrate_panels(const Sampler& h, double from, const Domain& d, const NumericsConfig& cfg) {
    d.validate();
    if (!d.contains(from) && from != d.T) throw std::invalid_argument("integration start lies outside the domain");
    if (d.approach == Approach::FromBelow) return panels_below(h, from, d, cfg);
    PanelSums p = panels_below([&h](double u) { return h(-u); }, -from, d.reflected(), cfg);
    for (double& x : p.nodes) x = -x;
    for (double& v : p.panels) v = -v;
    return p;
}

IntegralVerdict classify_panels(const PanelSums& p, const Domain& d, const NumericsConfig& cfg) {
    std::vector<double> xs(p.nodes.begin() + 1, p.nodes.end());
    std::vector<double> sums;
    double acc = 0.0;
    for (double v : p.panels) sums.push_back(acc += v);
    bool osc = false;
    const LimitVerdict s = classify_sequence(xs, sums, d, cfg, cfg.quad_tol, &osc);
    IntegralVerdict out;
    switch (s.tag) {
        case LimitVerdict::Tag::Finite: out = IntegralVerdict::convergent(s.value, std::max(s.err, p.abs_err)); break;
        case LimitVerdict::Tag::PlusInfinity: out = IntegralVerdict::divergent(+1, s.diagnostic); break;
        case LimitVerdict::Tag::MinusInfinity: out = IntegralVerdict::divergent(-1, s.diagnostic); break;
        case LimitVerdict::Tag::Indeterminate:
            out = osc ? IntegralVerdict::divergent(0, s.diagnostic) : IntegralVerdict::indeterminate(s.diagnostic);
            if (!osc && !p.stop_reason.empty()) out.diagnostic += "; integration stopped: " + p.stop_reason;
            break;
    }
    out.reach = xs.empty() ? std::numeric_limits<double>::quiet_NaN() : xs.back();
    return out;
}

IntegralVerdict improper_integral(const Sampler& h, double from, const Domain& d, double tol) {
    NumericsConfig cfg;
    cfg.quad_tol = tol;
    return improper_integral(h, from, d, cfg);
}

IntegralVerdict improper_integral(const Sampler& h, double from, const Domain& d, const NumericsConfig& cfg) {
    if (!(cfg.quad_tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
    return classify_panels(integrate_panels(h, from, d, cfg), d, cfg);
}

IntegralVerdict integral_or_indeterminate(const Sampler& h, double from, const Domain& d, const NumericsConfig& cfg) {
    try {
        return improper_integral(h, from, d, cfg);
    } catch (const NumericsError& e) {
        return IntegralVerdict::indeterminate(e.what());
    }
}

IntegralTails integral_tails(const Sampler& h, double from, const Domain& d, const NumericsConfig& cfg) {
    IntegralTails out;
    out.panels = integrate_panels(h, from, d, cfg);
    const PanelSums& p = out.panels;
    std::vector<double> xs(p.nodes.begin() + 1, p.nodes.end());
    std::vector<double> sums;
    double acc = 0.0;
    for (double v : p.panels) sums.push_back(acc += v);
    const LimitVerdict s = classify_sequence(xs, sums, d, cfg, cfg.quad_tol);
    out.total = classify_panels(p, d, cfg);
    if (!s.is_finite() || !out.total.is_convergent()) return out;

    const std::size_t n = p.panels.size();
    const double remainder = s.value - sums.back();
    out.nodes = p.nodes;
    out.tails.assign(n + 1, 0.0);
    out.errs.assign(n + 1, 0.0);
    out.tails[n] = remainder;
    out.errs[n] = s.err;
    for (std::size_t k = n; k-- > 0;) {
        out.tails[k] = out.tails[k + 1] + p.panels[k];
        out.errs[k] = out.errs[k + 1] + p.panel_errs[k] + 1e-16 * std::fabs(out.tails[k]);
    }
    return out;
}

namespace {

/// Integral over [a, b] of w(t) * (tail_b + integral of h from t to b).
/// Composite 15-point Kronrod rule with the embedded Gauss rule as error
/// estimate; the inner integral is accumulated node to node from b.
double iterated_panel(const Sampler& w, const Sampler& h, double a, double b, double tail_b, const NumericsConfig& cfg,
                      double* err) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    const auto& xk = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();
    std::size_t pieces = 8;
    if (cfg.period_hint && *cfg.period_hint > 0.0)
        pieces = static_cast<std::size_t>(std::clamp(std::ceil(std::fabs(b - a) / *cfg.period_hint), 1.0, 4096.0));
    std::optional<double> prev_est;
    for (;;) {
        double total = 0.0, est = 0.0;
        double tail = tail_b, right = b;
        for (std::size_t i = pieces; i-- > 0;) {
            const double l = a + (b - a) * static_cast<double>(i) / static_cast<double>(pieces);
            const double r = a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(pieces);
            const double c = 0.5 * (l + r), hw = 0.5 * (r - l);
            double kron = 0.0, gauss = 0.0;
            // Nodes from right to left: +x_7 .. +x_1, 0, -x_1 .. -x_7.
            for (int s = 14; s >= 0; --s) {
                const int j = s >= 7 ? s - 7 : 7 - s;
                const double t = c + (s >= 7 ? 1.0 : -1.0) * hw * xk[static_cast<std::size_t>(j)];
                // Neighbouring nodes are close; a shallow rule bounds the cost on noisy integrands.
                double pe = 0.0, pl = 0.0;
                if (t != right) tail += gk_piece(h, t, right, cfg.quad_tol / 10.0, 2, &pe, &pl);
                right = t;
                const double y = w(t) * tail;
                if (!std::isfinite(y)) throw EvalError(EvalError::Kind::NonFinite, "integrand", "non-finite integrand");
                kron += wk[static_cast<std::size_t>(j)] * y;
                if (j % 2 == 0) gauss += wg[static_cast<std::size_t>(j / 2)] * y;
            }
            total += hw * kron;
            est += std::fabs(hw * (kron - gauss));
        }
        // Refinement that no longer shrinks the estimate has hit the noise floor.
        const bool stalled = prev_est && est > 0.25 * *prev_est;
        if (est <= std::max(cfg.quad_tol / 10.0 * std::fabs(total), 1e-300) || pieces >= 1024 || stalled) {
            *err = est;
            return total;
        }
        prev_est = est;
        pieces *= 4;
    }
}

}  // namespace

IteratedVerdict iterated_integral(const Sampler& w, const Sampler& h, double from, const Domain& d,
                                  const NumericsConfig& cfg) {
    IteratedVerdict out;
    IntegralTails inner;
    try {
        inner = integral_tails(h, from, d, cfg);
    } catch (const NumericsError& e) {
        out.inner = IntegralVerdict::indeterminate(e.what());
        out.outer = IntegralVerdict::indeterminate("inner integral could not be evaluated");
        return out;
    }
    out.inner = inner.total;
    if (inner.tails.empty()) {
        out.outer = IntegralVerdict::indeterminate("inner tail integral is not convergent");
        return out;
    }
    PanelSums outer;
    outer.nodes.push_back(inner.nodes.front());
    // The tail at the last node is the bare extrapolated remainder; outer
    // panels stop one node earlier.
    for (std::size_t k = 0; k + 2 < inner.nodes.size(); ++k) {
        const double a = inner.nodes[k], b = inner.nodes[k + 1], tail_b = inner.tails[k + 1];
        double e = 0.0, v = 0.0;
        try {
            v = iterated_panel(w, h, a, b, tail_b, cfg, &e);
        } catch (const std::exception& ex) {
            if (outer.panels.size() < kMinPanels) {
                out.outer = IntegralVerdict::indeterminate(std::string("outer quadrature failed: ") + ex.what());
                return out;
            }
            outer.stop_reason = ex.what();
            break;
        }
        outer.nodes.push_back(b);
        outer.panels.push_back(v);
        outer.panel_errs.push_back(e);
        outer.abs_err += e;
    }
    out.outer = classify_panels(outer, d, cfg);
    return out;
}

}  // namespace twoterm
