#include "twoterm/expr.hpp"

#include <bit>
#include <cfloat>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "twoterm/errors.hpp"

namespace twoterm {

struct Expr::Node {
    Op op;
    double value;
    std::vector<Expr> kids;
    bool has_x;
};

namespace {

std::size_t arity(Op op) {
    switch (op) {
        case Op::Constant:
        case Op::Variable: return 0;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
        case Op::Pow: return 2;
        default: return 1;
    }
}

}  // namespace

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double c) {
    if (!std::isfinite(c)) throw std::invalid_argument("expression constants must be finite");
    return Expr(std::make_shared<const Node>(Node{Op::Constant, c, {}, false}));
}

Expr Expr::variable() { return Expr(std::make_shared<const Node>(Node{Op::Variable, 0.0, {}, true})); }

Expr Expr::unary(Op op, Expr arg) {
    if (arity(op) != 1) throw std::invalid_argument("operator is not unary");
    const bool has_x = arg.depends_on_x();
    return Expr(std::make_shared<const Node>(Node{op, 0.0, {std::move(arg)}, has_x}));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
    if (arity(op) != 2) throw std::invalid_argument("operator is not binary");
    const bool has_x = lhs.depends_on_x() || rhs.depends_on_x();
    return Expr(std::make_shared<const Node>(Node{op, 0.0, {std::move(lhs), std::move(rhs)}, has_x}));
}

Op Expr::op() const { return node_->op; }
double Expr::value() const { return node_->value; }
const std::vector<Expr>& Expr::children() const { return node_->kids; }
bool Expr::depends_on_x() const { return node_->has_x; }

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->op != b.node_->op) return false;
    if (a.node_->op == Op::Constant)
        return std::bit_cast<std::uint64_t>(a.node_->value) == std::bit_cast<std::uint64_t>(b.node_->value);
    const auto& ka = a.node_->kids;
    const auto& kb = b.node_->kids;
    for (std::size_t i = 0; i < ka.size(); ++i)
        if (!(ka[i] == kb[i])) return false;
    return true;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::binary(Op::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::binary(Op::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::binary(Op::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::binary(Op::Div, a, b); }
Expr operator-(const Expr& a) { return Expr::unary(Op::Neg, a); }
Expr pow(const Expr& base, const Expr& exponent) { return Expr::binary(Op::Pow, base, exponent); }
Expr pow(const Expr& base, double exponent) { return Expr::binary(Op::Pow, base, Expr::constant(exponent)); }

std::string_view function_name(Op op) {
    switch (op) {
        case Op::Sin: return "sin";
        case Op::Cos: return "cos";
        case Op::Tan: return "tan";
        case Op::Exp: return "exp";
        case Op::Log: return "log";
        case Op::Sqrt: return "sqrt";
        case Op::Abs: return "abs";
        case Op::Atan: return "atan";
        default: return {};
    }
}

// ---------------------------------------------------------------- printing

namespace {

int precedence(const Expr& e) {
    switch (e.op()) {
        case Op::Add:
        case Op::Sub: return 1;
        case Op::Mul:
        case Op::Div: return 2;
        case Op::Neg: return 3;
        case Op::Pow: return 4;
        case Op::Constant: return e.value() < 0 || std::signbit(e.value()) ? 3 : 5;
        default: return 5;
    }
}

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void print_into(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool wrap, std::string& out) {
    if (wrap) out += '(';
    print_into(e, out);
    if (wrap) out += ')';
}

void print_into(const Expr& e, std::string& out) {
    const auto& k = e.children();
    switch (e.op()) {
        case Op::Constant: out += format_number(e.value()); return;
        case Op::Variable: out += 'x'; return;
        case Op::Neg:
            out += '-';
            print_wrapped(k[0], precedence(k[0]) < 3, out);
            return;
        case Op::Add:
        case Op::Sub: {
            print_wrapped(k[0], precedence(k[0]) < 1, out);
            out += e.op() == Op::Add ? " + " : " - ";
            print_wrapped(k[1], precedence(k[1]) <= 1, out);
            return;
        }
        case Op::Mul:
        case Op::Div: {
            print_wrapped(k[0], precedence(k[0]) < 2, out);
            out += e.op() == Op::Mul ? " * " : " / ";
            print_wrapped(k[1], precedence(k[1]) <= 2, out);
            return;
        }
        case Op::Pow:
            print_wrapped(k[0], precedence(k[0]) < 5, out);
            out += '^';
            print_wrapped(k[1], precedence(k[1]) < 3, out);
            return;
        default:
            out += function_name(e.op());
            out += '(';
            print_into(k[0], out);
            out += ')';
            return;
    }
}

}  // namespace

std::string print(const Expr& e) {
    std::string out;
    print_into(e, out);
    return out;
}

// -------------------------------------------------------------- evaluation

namespace {

[[noreturn]] void fail(EvalError::Kind kind, const Expr& e, double x, const std::string& why) {
    std::ostringstream msg;
    msg.precision(17);
    msg << why << " in '" << print(e) << "' at x = " << x;
    throw EvalError(kind, print(e), msg.str());
}

bool tiny(double v) { return std::fabs(v) < DBL_MIN; }

Jet2 eval_node(const Expr& e, double x);

Jet2 integer_power(Jet2 base, long long n) {
    Jet2 acc = Jet2::constant(1.0);
    while (n > 0) {
        if (n & 1) acc = acc * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return acc;
}

Jet2 eval_pow(const Expr& e, double x) {
    const Expr& base_e = e.children()[0];
    const Expr& exp_e = e.children()[1];
    const Jet2 a = eval_node(base_e, x);
    if (!exp_e.depends_on_x()) {
        const double c = eval_node(exp_e, x).v;
        if (c == std::nearbyint(c) && std::fabs(c) <= 64.0) {
            const auto n = static_cast<long long>(c);
            Jet2 r = integer_power(a, n < 0 ? -n : n);
            if (n < 0) {
                if (r.v == 0.0) fail(EvalError::Kind::Domain, e, x, "zero raised to a negative power");
                r = Jet2::constant(1.0) / r;
            }
            if (a.v != 0.0 && tiny(r.v)) fail(EvalError::Kind::Underflow, e, x, "power underflows");
            return r;
        }
        if (c == std::nearbyint(c)) {
            if (a.v == 0.0 && c < 0) fail(EvalError::Kind::Domain, e, x, "zero raised to a negative power");
        } else if (!(a.v > 0.0)) {
            fail(EvalError::Kind::Domain, e, x, "non-integer power of a non-positive base");
        }
        const double g0 = std::pow(a.v, c);
        const double g1 = c * std::pow(a.v, c - 1.0);
        const double g2 = c * (c - 1.0) * std::pow(a.v, c - 2.0);
        if (a.v != 0.0 && tiny(g0)) fail(EvalError::Kind::Underflow, e, x, "power underflows");
        return compose(a, g0, g1, g2);
    }
    if (!(a.v > 0.0)) fail(EvalError::Kind::Domain, e, x, "variable power of a non-positive base");
    const Jet2 b = eval_node(exp_e, x);
    const Jet2 la = compose(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
    const Jet2 p = b * la;
    const double ev = std::exp(p.v);
    if (tiny(ev)) fail(EvalError::Kind::Underflow, e, x, "power underflows");
    return compose(p, ev, ev, ev);
}

Jet2 eval_unchecked(const Expr& e, double x) {
    const auto& k = e.children();
    switch (e.op()) {
        case Op::Constant: return Jet2::constant(e.value());
        case Op::Variable: return Jet2::variable(x);
        case Op::Neg: return -eval_node(k[0], x);
        case Op::Add: return eval_node(k[0], x) + eval_node(k[1], x);
        case Op::Sub: return eval_node(k[0], x) - eval_node(k[1], x);
        case Op::Mul: {
            const Jet2 a = eval_node(k[0], x);
            const Jet2 b = eval_node(k[1], x);
            const Jet2 r = a * b;
            if (a.v != 0.0 && b.v != 0.0 && tiny(r.v)) fail(EvalError::Kind::Underflow, e, x, "product underflows");
            return r;
        }
        case Op::Div: {
            const Jet2 a = eval_node(k[0], x);
            const Jet2 b = eval_node(k[1], x);
            if (b.v == 0.0) fail(EvalError::Kind::Domain, e, x, "division by zero");
            const Jet2 r = a / b;
            if (a.v != 0.0 && tiny(r.v)) fail(EvalError::Kind::Underflow, e, x, "quotient underflows");
            return r;
        }
        case Op::Pow: return eval_pow(e, x);
        case Op::Sin: {
            const Jet2 a = eval_node(k[0], x);
            const double s = std::sin(a.v), c = std::cos(a.v);
            return compose(a, s, c, -s);
        }
        case Op::Cos: {
            const Jet2 a = eval_node(k[0], x);
            const double s = std::sin(a.v), c = std::cos(a.v);
            return compose(a, c, -s, -c);
        }
        case Op::Tan: {
            const Jet2 a = eval_node(k[0], x);
            if (std::cos(a.v) == 0.0) fail(EvalError::Kind::Domain, e, x, "tan at a pole");
            const double t = std::tan(a.v);
            const double sec2 = 1.0 + t * t;
            return compose(a, t, sec2, 2.0 * t * sec2);
        }
        case Op::Exp: {
            const Jet2 a = eval_node(k[0], x);
            const double ev = std::exp(a.v);
            if (tiny(ev)) fail(EvalError::Kind::Underflow, e, x, "exponential underflows");
            return compose(a, ev, ev, ev);
        }
        case Op::Log: {
            const Jet2 a = eval_node(k[0], x);
            if (!(a.v > 0.0)) fail(EvalError::Kind::Domain, e, x, "log of a non-positive argument");
            return compose(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
        }
        case Op::Sqrt: {
            const Jet2 a = eval_node(k[0], x);
            if (!(a.v > 0.0)) fail(EvalError::Kind::Domain, e, x, "sqrt of a non-positive argument");
            const double s = std::sqrt(a.v);
            return compose(a, s, 0.5 / s, -0.25 / (s * a.v));
        }
        case Op::Abs: {
            const Jet2 a = eval_node(k[0], x);
            if (a.v == 0.0) fail(EvalError::Kind::Domain, e, x, "abs is not differentiable at 0");
            return a.v > 0.0 ? a : -a;
        }
        case Op::Atan: {
            const Jet2 a = eval_node(k[0], x);
            const double q = 1.0 / (1.0 + a.v * a.v);
            return compose(a, std::atan(a.v), q, -2.0 * a.v * q * q);
        }
    }
    fail(EvalError::Kind::Domain, e, x, "unknown node");
}

Jet2 eval_node(const Expr& e, double x) {
    const Jet2 r = eval_unchecked(e, x);
    if (!r.finite()) fail(EvalError::Kind::NonFinite, e, x, "non-finite intermediate");
    return r;
}

}  // namespace

Jet2 eval_jet2(const Expr& e, double x) {
    if (!std::isfinite(x)) throw EvalError(EvalError::Kind::Domain, "x", "evaluation point must be finite");
    return eval_node(e, x);
}

// ------------------------------------------------------------ linear terms

namespace {

bool constant_value(const Expr& e, double& out) {
    if (e.depends_on_x()) return false;
    try {
        out = eval_jet2(e, 0.0).v;
        return true;
    } catch (const EvalError&) {
        return false;
    }
}

void collect(const Expr& e, double w, std::vector<Term>& out) {
    const auto& k = e.children();
    double c = 0.0;
    switch (e.op()) {
        case Op::Add:
            collect(k[0], w, out);
            collect(k[1], w, out);
            return;
        case Op::Sub:
            collect(k[0], w, out);
            collect(k[1], -w, out);
            return;
        case Op::Neg: collect(k[0], -w, out); return;
        case Op::Mul:
            if (constant_value(k[0], c)) return collect(k[1], w * c, out);
            if (constant_value(k[1], c)) return collect(k[0], w * c, out);
            break;
        case Op::Div:
            if (constant_value(k[1], c) && c != 0.0) return collect(k[0], w / c, out);
            break;
        default: break;
    }
    if (constant_value(e, c)) {
        out.push_back({w * c, Expr::constant(1.0)});
        return;
    }
    out.push_back({w, e});
}

}  // namespace

std::vector<Term> additive_terms(const Expr& e) {
    std::vector<Term> raw;
    collect(e, 1.0, raw);
    std::vector<Term> merged;
    for (auto& t : raw) {
        bool found = false;
        for (auto& m : merged) {
            if (m.core == t.core) {
                m.weight += t.weight;
                found = true;
                break;
            }
        }
        if (!found) merged.push_back(t);
    }
    std::erase_if(merged, [](const Term& t) { return t.weight == 0.0; });
    return merged;
}

}  // namespace twoterm
