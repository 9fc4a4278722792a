#pragma once

#include <cmath>

namespace twoterm {

/// Value with its first and second derivative in one variable.
///
/// Arithmetic propagates the sum, product, quotient and chain rules, so an
/// expression evaluated on Jet2 yields f, f' and f'' to working precision.
struct Jet2 {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;

    static constexpr Jet2 constant(double c) { return {c, 0.0, 0.0}; }
    static constexpr Jet2 variable(double x) { return {x, 1.0, 0.0}; }

    bool finite() const { return std::isfinite(v) && std::isfinite(d1) && std::isfinite(d2); }
};

constexpr Jet2 operator-(const Jet2& a) { return {-a.v, -a.d1, -a.d2}; }
constexpr Jet2 operator+(const Jet2& a, const Jet2& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
constexpr Jet2 operator-(const Jet2& a, const Jet2& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
constexpr Jet2 operator*(double s, const Jet2& a) { return {s * a.v, s * a.d1, s * a.d2}; }

constexpr Jet2 operator*(const Jet2& a, const Jet2& b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

/// Quotient; the caller is responsible for b.v != 0.
constexpr Jet2 operator/(const Jet2& a, const Jet2& b) {
    const double q = a.v / b.v;
    const double q1 = (a.d1 - q * b.d1) / b.v;
    const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v;
    return {q, q1, q2};
}

/// Composition g(u) given g(u), g'(u), g''(u) at u = a.v.
constexpr Jet2 compose(const Jet2& a, double g0, double g1, double g2) {
    return {g0, g1 * a.d1, g2 * a.d1 * a.d1 + g1 * a.d2};
}

}  // namespace twoterm
