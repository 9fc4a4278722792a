#pragma once

#include <numbers>
#include <optional>
#include <vector>

#include "twoterm/analyzer.hpp"

namespace twoterm::testing {

struct CorpusEntry {
    const char* f;
    const char* phi1;
    const char* phi2;
    Domain d;
    std::optional<double> period_hint;
};

inline ScaleContext corpus_context(const CorpusEntry& e) {
    NumericsConfig cfg;
    cfg.period_hint = e.period_hint;
    return validate_scale(parse(e.phi1), parse(e.phi2), e.d, cfg);
}

inline ExpansionReport corpus_analyze(const CorpusEntry& e, const AnalyzeOptions& opt = {}) {
    return analyze(corpus_context(e), parse(e.f), opt);
}

/// Mixed scales and behaviours for the integral-criteria consistency checks.
inline std::vector<CorpusEntry> consistency_corpus() {
    constexpr double pi = std::numbers::pi;
    const Domain inf1 = Domain::to_infinity(1);
    return {
        {"2*x + 3 + 1/x", "x", "1", inf1, {}},
        {"x + log(log(x))", "x", "1", Domain::to_infinity(3), {}},
        {"x + 1 + sin(x)/x", "x", "1", inf1, pi},
        {"x + sqrt(x)", "x", "1", inf1, {}},
        {"x + atan(x)", "x", "1", inf1, {}},
        {"x + exp(-x)", "x", "1", inf1, {}},
        {"3*x - 2 + 1/x^2", "x", "1", inf1, {}},
        {"x + log(x)", "x", "1", inf1, {}},
        {"x + cos(x)/x", "x", "1", inf1, pi},
        {"5 + 1/x", "x", "1", inf1, {}},
        {"3*x^2 + 5*x + 1/x", "x^2", "x", inf1, {}},
        {"x^2 + x*log(x)", "x^2", "x", inf1, {}},
        {"x^2 + x + 1", "x^2", "x", inf1, {}},
        {"2*x^2 + sqrt(x)", "x^2", "x", inf1, {}},
        {"x^2 + x + sin(x)", "x^2", "x", inf1, pi},
        {"exp(x) + x + sin(x)", "exp(x)", "x", Domain::to_infinity(2), pi},
        {"exp(x) + 2*x + 1/x", "exp(x)", "x", Domain::to_infinity(2), {}},
        {"exp(x) + x + 1", "exp(x)", "x", Domain::to_infinity(2), {}},
        {"x + exp(-x) + sin(x)*exp(-x)/x", "x", "exp(-x)", inf1, pi},
        {"x + 2*exp(-x)", "x", "exp(-x)", inf1, {}},
        {"x + exp(-2*x)", "x", "exp(-x)", inf1, {}},
        {"x + 1/x + 1/x^2", "x", "1/x", inf1, {}},
        {"2 + 3*x + x^2", "1", "x", Domain::above(1, 0), {}},
        {"cos(x)", "1", "x", Domain::above(1, 0), {}},
        {"exp(x)", "1", "x", Domain::above(1, 0), {}},
        {"1 + x + x*sqrt(x)", "1", "x", Domain::above(1, 0), {}},
        {"1 + sqrt(x)", "1", "x", Domain::above(1, 0), {}},
        {"x^3 + sqrt(x) + 1", "x^3", "sqrt(x)", inf1, {}},
        {"x^2 + 2*x*log(x) + 1", "x^2", "x*log(x)", Domain::to_infinity(3), {}},
        {"x^2 + x*log(x) + 1/x", "x^2", "x*log(x)", Domain::to_infinity(3), {}},
    };
}

/// Functions with L[f] >= 0 on scales with phi1 > 0 and W > 0, and bounded
/// (f - a1 phi1)/phi2.
inline std::vector<CorpusEntry> convexity_corpus() {
    const Domain inf1 = Domain::to_infinity(1);
    return {
        {"x + 1/x", "x", "-1", inf1, {}},
        {"2*x + exp(-x)", "x", "-1", inf1, {}},
        {"x + 1/x^2", "x", "-1", inf1, {}},
        {"3*x + 1/(x + 1)", "x", "-1", inf1, {}},
        {"x + 1/(x + 2)", "x", "-1", inf1, {}},
        {"log(1 + exp(x))", "x", "-1", inf1, {}},
        {"exp(-x)", "x", "-1", inf1, {}},
        {"1/x", "x", "-1", inf1, {}},
        {"x + 1/(x^2 + 1)", "x", "-1", inf1, {}},
        {"4 - x + exp(-2*x) + 1/x", "x", "-1", inf1, {}},
        {"x^2 + x + 1/x", "x^2", "-x", inf1, {}},
        {"3*x^2 + x + log(x)", "x^2", "-x", Domain::to_infinity(5), {}},
        {"x^2 - 2*x + 1/x^2", "x^2", "-x", inf1, {}},
        {"2*x^2 + 1", "x^2", "-x", inf1, {}},
        {"x^2 + exp(-x)", "x^2", "-x", inf1, {}},
        {"x^2 + 3*x + 1/x^3", "x^2", "-x", inf1, {}},
        {"exp(x) + 1", "exp(x)", "-x", Domain::to_infinity(2), {}},
        {"2*exp(x) - x + exp(-x)", "exp(x)", "-x", Domain::to_infinity(2), {}},
        {"x^3 + 1/x", "x^3", "-x", inf1, {}},
        {"x^3 + x + 1/x^2", "x^3", "-x", inf1, {}},
    };
}

}  // namespace twoterm::testing
