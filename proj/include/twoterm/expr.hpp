#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "twoterm/jet.hpp"

namespace twoterm {

enum class Op {
    Constant,
    Variable,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Abs,
    Atan,
};

/// Immutable expression tree in the single variable x.
///
/// Copies share structure; equality is structural (same shape, same
/// constants bit for bit).
class Expr {
public:
    Expr();  // the constant 0

    static Expr constant(double c);
    static Expr variable();
    static Expr unary(Op op, Expr arg);
    static Expr binary(Op op, Expr lhs, Expr rhs);

    Op op() const;
    double value() const;  // meaningful for Op::Constant
    const std::vector<Expr>& children() const;

    /// True when the subtree mentions x.
    bool depends_on_x() const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr pow(const Expr& base, double exponent);

/// Parses the DSL documented in docs/dsl.md. Throws ParseError.
Expr parse(std::string_view source);

/// Minimal-parenthesis rendering; parse(print(e)) == e for trees whose
/// constants are non-negative (the parser never produces negative ones).
std::string print(const Expr& e);

/// Function name as written in the DSL, e.g. "sin"; empty for operators.
std::string_view function_name(Op op);

/// Evaluates e and its first two derivatives at x. Throws EvalError naming
/// the failing subexpression on domain violations, overflow or underflow.
Jet2 eval_jet2(const Expr& e, double x);

inline double eval(const Expr& e, double x) { return eval_jet2(e, x).v; }

/// One summand of an expression: weight * core, with core free of a
/// leading constant factor (a pure constant has core "1").
struct Term {
    double weight;
    Expr core;
};

/// Flattens top-level sums, differences, negations and constant factors.
/// The weighted sum of the returned terms equals e identically.
std::vector<Term> additive_terms(const Expr& e);

}  // namespace twoterm
