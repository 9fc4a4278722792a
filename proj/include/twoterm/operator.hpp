#pragma once

#include "twoterm/contact.hpp"

namespace twoterm {

/// The monic second-order operator whose kernel is span(phi1, phi2),
/// applied to f at x: det[(phi1, phi2, f); (') ; ('')] / W.
double apply_L(const ScaleContext& ctx, const Subject& f, double x);
double apply_L(const ScaleContext& ctx, const Expr& f, double x);

/// Coefficients of L[u] = u'' + a1(x) u' + a2(x) u at x.
struct OperatorCoefficients {
    double a1;
    double a2;
};
OperatorCoefficients operator_coefficients(const ScaleContext& ctx, double x);

enum class FactorKind { TypeI, TypeII, Indeterminate };

std::string_view factor_kind_name(FactorKind k);

/// L[f] = p2 (p1 (p0 f)')' built on one scale function (the pivot):
/// p0 = 1/phi, p1 = phi^2/W, p2 = W/phi.
struct Factorization {
    ScaleContext ctx;
    int pivot = 2;
    FactorKind kind = FactorKind::Indeterminate;
    IntegralVerdict reciprocal_p1;

    double p0(double x) const;
    double p1(double x) const;
    double p2(double x) const;
};

/// Pivot 2 gives the type I form, pivot 1 the type II form; the kind is
/// established numerically from the integral of 1/p1.
Factorization canonical_factorization(const ScaleContext& ctx, int pivot);

/// TypeI when the integral of 1/p1 toward x0 diverges, TypeII when it
/// converges.
FactorKind classify_type(const Factorization& fact, const Domain& d);

double factorized_apply(const Factorization& fact, const Expr& f, double x);

}  // namespace twoterm
