#pragma once

#include <cmath>
#include <random>
#include <string>

#include "twoterm/expr.hpp"

namespace twoterm::testing {

inline double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

/// Random smooth expressions on x in [0.5, 4]; every subterm stays well
/// inside the domain of the functions used, and constants are non-negative.
class ExprGen {
public:
    explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

    Expr operator()(int depth = 3) { return make(depth); }

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    std::mt19937_64& rng() { return rng_; }

private:
    Expr constant() { return Expr::constant(std::round(uniform(0.1, 3.0) * 8.0) / 8.0); }

    /// Strictly positive, bounded away from zero.
    Expr positive(int depth) {
        switch (pick(4)) {
            case 0: return Expr::variable() + constant();
            case 1: return Expr::unary(Op::Exp, Expr::unary(Op::Sin, make(depth - 1)));
            case 2: {
                const Expr c = Expr::unary(Op::Cos, make(depth - 1));
                return constant() + c * c;
            }
            default: return Expr::unary(Op::Exp, Expr::unary(Op::Atan, make(depth - 1)));
        }
    }

    Expr make(int depth) {
        if (depth <= 0) return pick(3) == 0 ? constant() : Expr::variable();
        switch (pick(11)) {
            case 0: return make(depth - 1) + make(depth - 1);
            case 1: return make(depth - 1) - make(depth - 1);
            case 2: return make(depth - 1) * make(depth - 1);
            case 3: return make(depth - 1) / positive(depth - 1);
            case 4: return Expr::unary(Op::Sin, make(depth - 1));
            case 5: return Expr::unary(Op::Cos, make(depth - 1));
            case 6: return Expr::unary(Op::Exp, Expr::unary(Op::Sin, make(depth - 1)));
            case 7: return Expr::unary(Op::Log, positive(depth - 1));
            case 8: return Expr::unary(Op::Sqrt, positive(depth - 1));
            case 9: return Expr::unary(Op::Atan, make(depth - 1));
            default: return pow(positive(depth - 1), Expr::constant(std::round(uniform(0.0, 3.0) * 4.0) / 4.0));
        }
    }

    std::mt19937_64 rng_;
};

}  // namespace twoterm::testing
