#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace twoterm {

enum class Approach { FromBelow, FromAbove };

/// Working interval with anchor T and boundary point x0.
///
/// FromBelow covers [T, x0) with x0 finite or +inf; FromAbove covers
/// (x0, T] and needs a finite x0 < T.
struct Domain {
    double T = 0.0;
    double x0 = std::numeric_limits<double>::infinity();
    Approach approach = Approach::FromBelow;

    static Domain to_infinity(double T) { return {T, std::numeric_limits<double>::infinity(), Approach::FromBelow}; }
    static Domain below(double T, double x0) { return {T, x0, Approach::FromBelow}; }
    static Domain above(double T, double x0) { return {T, x0, Approach::FromAbove}; }

    bool infinite() const { return x0 == std::numeric_limits<double>::infinity(); }
    /// Throws std::invalid_argument when the interval is empty or ill-oriented.
    void validate() const;
    /// True for points of the working interval, anchor included.
    bool contains(double x) const;
    /// The mirror image under t -> -t, always FromBelow.
    Domain reflected() const;
};

/// Auto tries both extrapolations and keeps the more stable one.
enum class Strategy { Auto, Wynn, Richardson };

/// Every numerical default in one place.
struct NumericsConfig {
    double limit_tol = 1e-6;
    double quad_tol = 1e-8;
    double mesh_ratio = 2.0;
    int mesh_count = 48;
    double divergence_threshold = 1e12;
    int wynn_depth = 10;
    int grid_size = 256;
    std::optional<double> period_hint;
    Strategy strategy = Strategy::Auto;
};

struct LimitVerdict {
    enum class Tag { Finite, PlusInfinity, MinusInfinity, Indeterminate };

    Tag tag = Tag::Indeterminate;
    double value = 0.0;
    double err = 0.0;
    std::string diagnostic;
    /// Farthest mesh point that produced a usable sample (NaN if none).
    double reach = std::numeric_limits<double>::quiet_NaN();

    static LimitVerdict finite(double v, double e) { return {Tag::Finite, v, e, {}}; }
    static LimitVerdict plus_infinity(std::string why = {}) { return {Tag::PlusInfinity, 0.0, 0.0, std::move(why)}; }
    static LimitVerdict minus_infinity(std::string why = {}) { return {Tag::MinusInfinity, 0.0, 0.0, std::move(why)}; }
    static LimitVerdict indeterminate(std::string why) { return {Tag::Indeterminate, 0.0, 0.0, std::move(why)}; }

    bool is_finite() const { return tag == Tag::Finite; }
    bool is_definite() const { return tag != Tag::Indeterminate; }
};

struct IntegralVerdict {
    enum class Tag { Convergent, Divergent, Indeterminate };

    Tag tag = Tag::Indeterminate;
    double value = 0.0;
    double err = 0.0;
    /// +1 or -1 for monotone divergence, 0 when the partial integrals
    /// oscillate with unbounded amplitude.
    int sign = 0;
    std::string diagnostic;
    double reach = std::numeric_limits<double>::quiet_NaN();

    static IntegralVerdict convergent(double v, double e) { return {Tag::Convergent, v, e, 0, {}}; }
    static IntegralVerdict divergent(int s, std::string why = {}) { return {Tag::Divergent, 0.0, 0.0, s, std::move(why)}; }
    static IntegralVerdict indeterminate(std::string why) { return {Tag::Indeterminate, 0.0, 0.0, 0, std::move(why)}; }

    bool is_convergent() const { return tag == Tag::Convergent; }
    bool is_divergent() const { return tag == Tag::Divergent; }
    bool oscillating_unbounded() const { return tag == Tag::Divergent && sign == 0; }
};

/// A real function that may throw EvalError (or return a non-finite value)
/// where it cannot be evaluated.
using Sampler = std::function<double(double)>;

/// Geometric mesh toward the boundary point, starting at T0.
std::vector<double> boundary_mesh(const Domain& d, double T0, double ratio, int count);

/// Default first mesh point strictly between `from` and x0.
double default_mesh_start(const Domain& d, double from);

/// The mesh used by limits and integrals: boundary_mesh from the default
/// start, with points snapped to multiples of the period hint when x0 is
/// infinite and a hint is configured.
std::vector<double> sampling_mesh(const Domain& d, const NumericsConfig& cfg, double from);

LimitVerdict limit_at_boundary(const Sampler& g, const Domain& d, double tol);
LimitVerdict limit_at_boundary(const Sampler& g, const Domain& d, const NumericsConfig& cfg);

/// limit_at_boundary, with sampling failures on most of the mesh reported
/// as Indeterminate instead of thrown.
LimitVerdict limit_or_indeterminate(const Sampler& g, const Domain& d, const NumericsConfig& cfg);
IntegralVerdict integral_or_indeterminate(const Sampler& h, double from, const Domain& d, const NumericsConfig& cfg);

/// Wraps g so that it fails (EvalError, kind Precision) wherever
/// |amplification(x)| * err exceeds cap. Used where a coefficient known only
/// to within err multiplies a growing function: beyond that point the
/// samples carry no information and are treated as past the horizon.
Sampler sensitivity_guard(Sampler g, Sampler amplification, double err, double cap);

/// Oriented integral of h from `from` to x0.
IntegralVerdict improper_integral(const Sampler& h, double from, const Domain& d, double tol);
IntegralVerdict improper_integral(const Sampler& h, double from, const Domain& d, const NumericsConfig& cfg);

/// Panel integrals over [from, x_0], [x_0, x_1], ... along the sampling mesh.
/// nodes has one more entry than panels; integration stops early at the
/// evaluation horizon (the first panel that cannot be integrated).
struct PanelSums {
    std::vector<double> nodes;
    std::vector<double> panels;
    std::vector<double> panel_errs;
    double abs_err = 0.0;
    std::string stop_reason;
};

PanelSums integrate_panels(const Sampler& h, double from, const Domain& d, const NumericsConfig& cfg);

/// Verdict on the partial integrals of an already integrated panel list.
IntegralVerdict classify_panels(const PanelSums& p, const Domain& d, const NumericsConfig& cfg);

/// Adaptive Gauss-Kronrod on a finite interval (a < b or a > b); pieces
/// follow the period hint when one is configured.
/// l1, when given, receives the integral of |h| as seen by the rule.
double integrate_interval(const Sampler& h, double a, double b, const NumericsConfig& cfg, double* abs_err = nullptr,
                          double* l1 = nullptr);

/// Tails of the integral of h toward x0 at the panel nodes: suffix panel
/// sums plus the accelerated remainder beyond the last node. Empty when the
/// integral itself is not Convergent.
struct IntegralTails {
    std::vector<double> nodes;
    std::vector<double> tails;
    std::vector<double> errs;
    PanelSums panels;
    IntegralVerdict total;
};

IntegralTails integral_tails(const Sampler& h, double from, const Domain& d, const NumericsConfig& cfg);

/// The integral from `from` to x0 of w(t) times the tail integral of h from t
/// to x0. Both the inner tail verdict and the outer verdict are reported.
struct IteratedVerdict {
    IntegralVerdict inner;
    IntegralVerdict outer;
};

IteratedVerdict iterated_integral(const Sampler& w, const Sampler& h, double from, const Domain& d,
                                  const NumericsConfig& cfg);

// --------------------------------------------------------- acceleration

/// Wynn epsilon extrapolation of a sequence, using at most `depth` columns.
/// Returns the even-column entry built from the latest terms.
double wynn_epsilon(std::span<const double> s, int depth);

/// Repeated Richardson extrapolation assuming errors in powers of 1/ratio^k.
double richardson(std::span<const double> s, double ratio, int depth);

/// Classifies a sampled approach to x0; xs must move monotonically toward
/// x0 on a FromBelow domain.
LimitVerdict classify_sequence(std::span<const double> xs, std::span<const double> ys, const Domain& d,
                               const NumericsConfig& cfg, double tol, bool* oscillating_unbounded = nullptr);

}  // namespace twoterm
