#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twoterm/contact.hpp"
#include "twoterm/operator.hpp"

namespace twoterm {

enum class ClassTag { LimitTangent, AsymptoticCurveOnly, FirstOrderOnly, NoExpansion, Indeterminate };

std::string_view class_tag_name(ClassTag t);

struct Classification {
    ClassTag tag = ClassTag::Indeterminate;
    /// The verdict that decided the tag, or that blocked a decision.
    std::string blocking;
    std::string summary;
};

/// First coefficient: the quotient f/phi1 and the contact coefficient f1*
/// must agree. The reported value is the quotient estimate.
struct A1Estimate {
    LimitVerdict combined;
    LimitVerdict quotient;
    LimitVerdict contact;
};

/// Second coefficient from (f - a1 phi1)/phi2 and from the limit of f2*.
struct A2Estimate {
    LimitVerdict naive;
    LimitVerdict geometric;
};

struct CriteriaReport {
    /// Integral of phi2 L[f] / W: finite f1* limit.
    IntegralVerdict first_coefficient;
    /// Integral of (phi1/phi2)' times the tail of phi2 L[f] / W.
    IteratedVerdict iterated;
    /// Integral of phi1 L[f] / W: finite f2* limit.
    IntegralVerdict second_coefficient;
    /// Integral of Phi L[f] / W: finite F* limit.
    IntegralVerdict indicatrix;
};

struct RemainderBound {
    enum class Kind { Finite, Infinite, Unavailable };
    Kind kind = Kind::Unavailable;
    double value = 0.0;

    static RemainderBound finite(double v) { return {Kind::Finite, v}; }
    static RemainderBound infinite() { return {Kind::Infinite, 0.0}; }
    static RemainderBound unavailable() { return {}; }
    bool is_finite() const { return kind == Kind::Finite; }
};

struct RemainderRow {
    double x = 0.0;
    double R = 0.0;
    /// Sup bounds from f2* and F* (approximate: sampled tail sup, inflated
    /// by 1.05) and the integral bounds.
    RemainderBound b_f2star, b_Fstar, b_phi1_integral, b_Phi_integral;
    /// Whether a point xi in [x, reach] with f2*(xi) = a2 + R(x)/phi2(x) was found.
    bool xi_found = false;
    double xi = 0.0;
};

enum class Growth { Vanishing, Bounded, Unbounded, Indeterminate };

std::string_view growth_name(Growth g);

/// Behaviour of |g| along the sampling mesh from d.T.
Growth growth_along_mesh(const Sampler& g, const Domain& d, const NumericsConfig& cfg);

enum class Tri { Yes, No, Unknown };

std::string_view tri_name(Tri t);

struct ConvexityReport {
    Tri convex = Tri::Unknown;
    std::string reason;
    /// Only evaluated when convex is Yes.
    Tri f2star_nondecreasing = Tri::Unknown;
    Tri first_order_inference = Tri::Unknown;
    Tri naive_quotient_bounded = Tri::Unknown;
    bool upgraded = false;
};

struct PowerRatioCheck {
    double expected = 0.0;
    /// Mean and spread of (phi2/phi1)' / x^(a2-a1-1) on the mesh.
    double derivative_mean = 0.0, derivative_spread = 0.0;
    /// Mean and spread of x (phi1/phi2)(phi2/phi1)'.
    double log_slope_mean = 0.0, log_slope_spread = 0.0;
};

struct TauberianReport {
    /// L[f] phi1^3 / W^2 and L[f] phi1^2 phi2 / W^2.
    Growth ratio_cubic = Growth::Indeterminate;
    Growth ratio_mixed = Growth::Indeterminate;
    /// s phi'/phi and s phi''/phi' bounded both ways, phi = phi2/phi1,
    /// s = x at +inf and x - x0 otherwise.
    Tri comparable_first = Tri::Unknown;
    Tri comparable_second = Tri::Unknown;
    /// Strong regular-variation indexes of phi1, phi2.
    LimitVerdict index1, index2;
    /// Limit of s (phi1/phi2)(phi2/phi1)'.
    LimitVerdict log_slope;
    std::optional<PowerRatioCheck> power_ratio;
    /// Limit of phi2'/phi1'.
    LimitVerdict derivative_ratio;
    std::string standard_derivative;
    LimitVerdict standard_derivative_limit;
    std::string note;
};

struct ExpansionReport {
    A1Estimate a1_detail;
    A2Estimate a2_detail;
    LimitVerdict a1;
    LimitVerdict a2;
    LimitVerdict gamma;
    /// gamma - phi1(T) a1 - phi2(T) a2, with the combined error bar.
    std::optional<std::pair<double, double>> gamma_residual;
    bool gamma_identity = false;
    /// Limit of (phi1/phi2) times the tail of (phi2/phi1)' f2*; equals -m.
    LimitVerdict asymptotic_mean;
    /// The indicatrix mean l.
    LimitVerdict indicatrix_mean;
    CriteriaReport criteria;
    Classification classification;
    std::vector<RemainderRow> remainder_table;
    ConvexityReport convexity;
    TauberianReport tauberian;
};

struct AnalyzeOptions {
    bool convexity = true;
    bool tauberian = true;
};

A1Estimate estimate_a1(const ScaleContext& ctx, const Subject& f);
A2Estimate estimate_a2(const ScaleContext& ctx, const Subject& f, const LimitVerdict& a1);
LimitVerdict asymptotic_mean(const ScaleContext& ctx, const Subject& f);
LimitVerdict indicatrix_mean(const ScaleContext& ctx, const Subject& f);
CriteriaReport integral_criteria(const ScaleContext& ctx, const Subject& f);

/// f(x) - a1 phi1(x) - a2 phi2(x), with kernel parts cancelled exactly.
double remainder(const ScaleContext& ctx, const Subject& f, double a1, double a2, double x);
double remainder(const ScaleContext& ctx, const Expr& f, double a1, double a2, double x);

/// Bounds on |R(x)|; tail samples and integrals stop at `reach`.
RemainderRow remainder_bounds(const ScaleContext& ctx, const Subject& f, double a1, double a2, double gamma, double x,
                              double reach);

/// Yes when phi1 > 0, W > 0 and L[f] >= -1e-10 at every grid point.
ConvexityReport convexity_flag(const ScaleContext& ctx, const Subject& f);

TauberianReport tauberian_diagnostics(const ScaleContext& ctx, const Subject& f, const ExpansionReport& r);

ExpansionReport analyze(const ScaleContext& ctx, const Expr& f, const AnalyzeOptions& opt = {});

}  // namespace twoterm
