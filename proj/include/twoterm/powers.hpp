#pragma once

#include <optional>

#include "twoterm/contact.hpp"
#include "twoterm/operator.hpp"

namespace twoterm {

enum class PowerDirection { ToInfinity, ToZero };

/// The scale of two real powers x^alpha1, x^alpha2 with alpha1 > alpha2, on
/// [1, +inf) or (0, 1]. Coefficients are always labelled by exponent:
/// a1 multiplies x^alpha1 and a2 multiplies x^alpha2, whichever dominates.
struct PowerScale {
    double alpha1 = 1.0;
    double alpha2 = 0.0;
    PowerDirection direction = PowerDirection::ToInfinity;

    void validate() const;
    /// Exponent of the dominant power at the boundary.
    double dominant() const { return direction == PowerDirection::ToInfinity ? alpha1 : alpha2; }
    double subdominant() const { return direction == PowerDirection::ToInfinity ? alpha2 : alpha1; }
    Domain domain() const;
};

/// f'' + (1 - alpha1 - alpha2) f'/x + alpha1 alpha2 f/x^2.
double euler_L(const PowerScale& ps, const Expr& f, double x);

/// Closed-form contact quantities with reference line T = 1; f1_star is the
/// coefficient of x^alpha1 and f2_star that of x^alpha2.
ContactPoint power_contact(const PowerScale& ps, const Expr& f, double x);

/// Exponent a when e is structurally x^a (1, x, sqrt(x), 1/x and x^c forms).
std::optional<double> power_exponent(const Expr& e);

/// Recognizes a pair of powers with the dominant one first; nullopt for
/// anything else.
std::optional<PowerScale> detect_power_scale(const Expr& phi1, const Expr& phi2, const Domain& d);

Expr power_expr(double alpha);

/// The generic scale context for ps, dominant power first.
ScaleContext power_context(const PowerScale& ps, const NumericsConfig& cfg = {});

struct PowerCoefficients {
    LimitVerdict a1;
    LimitVerdict a2;
    /// Oriented integrals from 1 to the boundary of t^(1-alpha) L[f] for the
    /// dominant and the subdominant exponent.
    IntegralVerdict dominant_integral;
    IntegralVerdict subdominant_integral;
};

/// Coefficients from the boundary values at 1 plus the integrals of the
/// exact derivatives [t^(a-b+1) (t^-b f)']' = t^(1-a) L[f].
PowerCoefficients power_coefficient_formulas(const PowerScale& ps, const Expr& f, const NumericsConfig& cfg = {});

struct PowerAnalysis {
    PowerScale scale;
    PowerCoefficients coeffs;
    /// Coefficients as direct limits: f/x^dom, then (f - a_dom x^dom)/x^sub.
    LimitVerdict a1_direct;
    LimitVerdict a2_direct;
    /// Integral of t^(1-sub) L[f]: convergent iff f has a limit tangent curve.
    IntegralVerdict tangent_criterion;
    /// Iterated integral of t^(dom-sub-1) times the tail of s^(1-dom) L[f]:
    /// convergent iff the first-order derivative pair holds.
    IteratedVerdict asymptote_criterion;
    /// Limit of (f' - a1 alpha1 x^(alpha1-1) - a2 alpha2 x^(alpha2-1)) / x^(sub-1).
    LimitVerdict derivative_pair;
    /// Limit of (f' - a_dom alpha_dom x^(dom-1)) / x^(dom-1).
    LimitVerdict first_derivative;
    /// Factorization types with pivot x^alpha2 and pivot x^alpha1.
    FactorKind pivot_alpha2_type = FactorKind::Indeterminate;
    FactorKind pivot_alpha1_type = FactorKind::Indeterminate;
};

PowerAnalysis analyze_powers(const PowerScale& ps, const Expr& f, const NumericsConfig& cfg = {});

}  // namespace twoterm
