#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "twoterm/numerics.hpp"

namespace twoterm {

double wynn_epsilon(std::span<const double> s, int depth) {
    if (s.empty()) throw std::invalid_argument("wynn_epsilon needs at least one term");
    const int n = static_cast<int>(s.size());
    const int cols = std::min(depth, n - 1);
    std::vector<double> prev(s.size() + 1, 0.0);
    std::vector<double> cur(s.begin(), s.end());
    double best = s.back();
    for (int k = 1; k <= cols; ++k) {
        std::vector<double> next(cur.size() - 1);
        for (std::size_t j = 0; j + 1 < cur.size(); ++j) {
            const double diff = cur[j + 1] - cur[j];
            if (diff == 0.0 || !std::isfinite(diff)) return best;
            next[j] = prev[j + 1] + 1.0 / diff;
            if (!std::isfinite(next[j])) return best;
        }
        prev = std::move(cur);
        cur = std::move(next);
        if (k % 2 == 0) best = cur.back();
    }
    return best;
}

double richardson(std::span<const double> s, double ratio, int depth) {
    if (s.empty()) throw std::invalid_argument("richardson needs at least one term");
    if (!(ratio > 1.0)) throw std::invalid_argument("richardson ratio must exceed 1");
    std::vector<double> row(s.begin(), s.end());
    const int cols = std::min<int>(depth, static_cast<int>(s.size()) - 1);
    double factor = 1.0;
    for (int m = 1; m <= cols; ++m) {
        factor *= ratio;
        std::vector<double> next(row.size() - 1);
        for (std::size_t k = 0; k + 1 < row.size(); ++k) next[k] = (factor * row[k + 1] - row[k]) / (factor - 1.0);
        row = std::move(next);
    }
    return row.back();
}

namespace {

struct Fit {
    double slope = 0.0;
    double rss = 0.0;
};

Fit linear_fit(const std::vector<double>& u, const std::vector<double>& y) {
    const double n = static_cast<double>(u.size());
    double su = 0, sy = 0;
    for (std::size_t i = 0; i < u.size(); ++i) su += u[i], sy += y[i];
    const double mu = su / n, my = sy / n;
    double suu = 0, suy = 0;
    for (std::size_t i = 0; i < u.size(); ++i) suu += (u[i] - mu) * (u[i] - mu), suy += (u[i] - mu) * (y[i] - my);
    Fit f;
    f.slope = suu > 0 ? suy / suu : 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double r = y[i] - my - f.slope * (u[i] - mu);
        f.rss += r * r;
    }
    return f;
}

std::string fmt(double v) {
    std::ostringstream o;
    o.precision(3);
    o << v;
    return o.str();
}

double spread(std::span<const double> v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

}  // namespace

LimitVerdict classify_sequence(std::span<const double> xs, std::span<const double> ys, const Domain& d,
                               const NumericsConfig& cfg, double tol, bool* oscillating_unbounded) {
    if (oscillating_unbounded) *oscillating_unbounded = false;
    if (xs.size() != ys.size()) throw std::invalid_argument("sample abscissae and values differ in length");
    const std::size_t n = ys.size();
    if (n < 4) return LimitVerdict::indeterminate("only " + std::to_string(n) + " usable samples");

    // Log-scale distance to the boundary, shifted to start at 1 or above.
    std::vector<double> ell(n);
    for (std::size_t k = 0; k < n; ++k)
        ell[k] = std::log(d.infinite() ? xs[k] : 1.0 / std::fabs(xs[k] - d.x0));
    if (ell[0] < 1.0) {
        const double shift = 1.0 - ell[0];
        for (double& l : ell) l += shift;
    }

    const std::size_t m = std::min<std::size_t>(n - 1, 8);
    const std::size_t first = n - 1 - m;
    std::vector<double> inc;
    for (std::size_t i = first; i + 1 < n; ++i) inc.push_back(ys[i + 1] - ys[i]);
    const bool up = std::all_of(inc.begin(), inc.end(), [](double v) { return v > 0; });
    const bool down = std::all_of(inc.begin(), inc.end(), [](double v) { return v < 0; });
    const double last = ys[n - 1];

    if (up || down) {
        auto diverge = [&](const std::string& why) {
            return up ? LimitVerdict::plus_infinity(why) : LimitVerdict::minus_infinity(why);
        };
        if (std::fabs(last) > cfg.divergence_threshold) return diverge("monotone beyond the divergence threshold");
        if (m >= 4) {
            std::vector<double> mid, logmid, logd;
            for (std::size_t i = 0; i < inc.size(); ++i) {
                const double l = 0.5 * (ell[first + i] + ell[first + i + 1]);
                mid.push_back(l);
                logmid.push_back(std::log(l));
                logd.push_back(std::log(std::fabs(inc[i])));
            }
            const Fit geo = linear_fit(mid, logd);
            const Fit pw = linear_fit(logmid, logd);
            if (geo.rss <= pw.rss && geo.slope > -1e-3)
                return diverge("monotone with non-decaying increments");
            if (pw.rss < geo.rss && -pw.slope <= 1.05)
                return diverge("monotone with increments decaying like a power " + fmt(-pw.slope) +
                               " <= 1 of the log distance");
        }
    } else {
        const double amp = std::fabs(*std::max_element(ys.begin() + static_cast<std::ptrdiff_t>(first), ys.end(),
                                                       [](double a, double b) { return std::fabs(a) < std::fabs(b); }));
        if (amp > cfg.divergence_threshold) {
            if (oscillating_unbounded) *oscillating_unbounded = true;
            return LimitVerdict::indeterminate("oscillation with amplitude beyond the divergence threshold");
        }
    }

    // Extrapolate over windows of the latest terms; the window length with
    // the most stable estimate across the three latest ends is kept.
    auto accelerate = [&](Strategy how, std::size_t end, std::size_t w) {
        const auto window = ys.subspan(end + 1 - w, w);
        return how == Strategy::Wynn ? wynn_epsilon(window, cfg.wynn_depth)
                                     : richardson(window, cfg.mesh_ratio, cfg.wynn_depth);
    };
    const std::size_t max_w = std::min<std::size_t>(n - 2, static_cast<std::size_t>(cfg.wynn_depth) + 1);
    double err_acc = INFINITY, est0 = last;
    for (Strategy how : {Strategy::Wynn, Strategy::Richardson}) {
        if (cfg.strategy != Strategy::Auto && cfg.strategy != how) continue;
        const std::size_t step = how == Strategy::Wynn ? 2 : 1;
        for (std::size_t w = how == Strategy::Wynn ? 3 : 2; w <= max_w; w += step) {
            const double est[3] = {accelerate(how, n - 1, w), accelerate(how, n - 2, w), accelerate(how, n - 3, w)};
            if (!std::isfinite(est[0]) || !std::isfinite(est[1]) || !std::isfinite(est[2])) continue;
            const double e = spread(est);
            if (e <= err_acc) err_acc = e, est0 = est[0];
        }
    }
    const double err_raw = spread(ys.subspan(n - 3));

    double value = last, err = err_raw;
    if (err_acc < err_raw) value = est0, err = err_acc;

    double recent = 0.0, earlier = 0.0;
    for (std::size_t i = 0; i < inc.size(); ++i) {
        const double a = std::fabs(inc[i]);
        if (i + 3 >= inc.size()) recent = std::max(recent, a);
        else earlier = std::max(earlier, a);
    }
    const double floor = 1e-14 * (1.0 + std::fabs(value));
    const bool contracting = recent <= earlier + floor;

    if (contracting && err <= tol * (1.0 + std::fabs(value))) return LimitVerdict::finite(value, err);

    int sign_changes = 0;
    for (std::size_t i = 1; i < inc.size(); ++i)
        if ((inc[i] > 0) != (inc[i - 1] > 0)) ++sign_changes;
    if (sign_changes >= 2) return LimitVerdict::indeterminate("oscillation without stabilization (spread " + fmt(err_raw) + ")");
    return LimitVerdict::indeterminate("slow or irregular convergence (spread " + fmt(err) + ")");
}

}  // namespace twoterm
