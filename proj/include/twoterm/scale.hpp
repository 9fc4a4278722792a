#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twoterm/expr.hpp"
#include "twoterm/numerics.hpp"

namespace twoterm {

/// Which basic assumption on the scale pair failed.
enum class ScaleClause { Evaluation, Growth, Nonvanishing, Wronskian };

std::string_view clause_name(ScaleClause c);

class ScaleInvalid : public std::runtime_error {
public:
    ScaleInvalid(ScaleClause clause, double witness, const std::string& what)
        : std::runtime_error(what), clause_(clause), witness_(witness) {}

    ScaleClause clause() const { return clause_; }
    /// Point at which the violation was observed.
    double witness() const { return witness_; }

private:
    ScaleClause clause_;
    double witness_;
};

/// f g' - f' g at x.
double wronskian(const Expr& f, const Expr& g, double x);

/// A validated scale pair. Immutable once built.
struct ScaleContext {
    Expr phi1;
    Expr phi2;
    Domain domain;
    /// Reference line for the contact indicatrix (defaults to domain.T).
    double T_ref = 0.0;
    NumericsConfig cfg;
    std::vector<double> grid;
    int sign_phi1 = 1;
    int sign_phi2 = 1;
    int sign_W = 1;
    LimitVerdict growth_verdict;

    Jet2 jet1(double x) const { return eval_jet2(phi1, x); }
    Jet2 jet2(double x) const { return eval_jet2(phi2, x); }
    /// W(phi1, phi2)(x).
    double W(double x) const;
    /// W and its derivative phi1 phi2'' - phi1'' phi2.
    std::pair<double, double> W_jet(double x) const;
};

/// Validation points: the anchor, then geometric toward x0 (n points).
std::vector<double> validation_grid(const Domain& d, int n);

/// Checks nonvanishing of phi1, phi2, a nonvanishing Wronskian of constant
/// sign on the grid, and phi2/phi1 -> 0 at x0. Throws ScaleInvalid.
ScaleContext validate_scale(const Expr& phi1, const Expr& phi2, const Domain& d, const NumericsConfig& cfg = {},
                            std::optional<double> T_ref = std::nullopt);

/// Sign conditions for generalized convexity: phi1 > 0 and W > 0.
bool check_ect_signs(const ScaleContext& ctx);

}  // namespace twoterm
