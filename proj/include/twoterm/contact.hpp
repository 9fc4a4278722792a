#pragma once

#include <utility>

#include "twoterm/scale.hpp"

namespace twoterm {

/// f written as c1*phi1 + c2*phi2 + residual, where the kernel part is read
/// off structurally from summands that repeat phi1 or phi2 up to a constant
/// factor. Kernel summands contribute exact constants to every contact
/// quantity, so only the residual is evaluated numerically.
struct Subject {
    Expr f;
    double c1 = 0.0;
    double c2 = 0.0;
    Expr residual;
    bool has_residual = true;

    Jet2 residual_jet(double x) const { return has_residual ? eval_jet2(residual, x) : Jet2{}; }
    Jet2 jet(const ScaleContext& ctx, double x) const;
};

Subject split_subject(const ScaleContext& ctx, const Expr& f);

struct ContactPoint {
    double t;
    double f1_star;
    double f2_star;
    double F_star;
};

/// W(f, phi2)/W: coefficient of phi1 in the curve osculating f at t.
double f1_star(const ScaleContext& ctx, const Subject& f, double t);
double f1_star(const ScaleContext& ctx, const Expr& f, double t);

/// -W(f, phi1)/W: coefficient of phi2 in the osculating curve.
double f2_star(const ScaleContext& ctx, const Subject& f, double t);
double f2_star(const ScaleContext& ctx, const Expr& f, double t);

/// phi2(T) phi1(x) - phi1(T) phi2(x), vanishing on the reference line.
double big_phi(const ScaleContext& ctx, double x);
Jet2 big_phi_jet(const ScaleContext& ctx, double x);

/// W(Phi, f)/W: ordinate of the osculating curve on the reference line.
double F_star(const ScaleContext& ctx, const Subject& f, double t);
double F_star(const ScaleContext& ctx, const Expr& f, double t);

ContactPoint contact_point(const ScaleContext& ctx, const Subject& f, double t);
ContactPoint contact_point(const ScaleContext& ctx, const Expr& f, double t);

std::pair<double, double> osculating_coeffs(const ScaleContext& ctx, const Expr& f, double t0);

/// W(t), throwing EvalError when it is too small to divide by.
double checked_wronskian(const ScaleContext& ctx, double t);

}  // namespace twoterm
