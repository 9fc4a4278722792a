#include <cctype>
#include <charconv>
#include <numbers>
#include <optional>

#include "twoterm/errors.hpp"
#include "twoterm/expr.hpp"

namespace twoterm {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, Invalid, End };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string_view text;
    double number = 0.0;
};

std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + std::string(t.text) + "'";
}

std::optional<Op> lookup_function(std::string_view name) {
    static constexpr std::pair<std::string_view, Op> table[] = {
        {"sin", Op::Sin}, {"cos", Op::Cos},   {"tan", Op::Tan}, {"exp", Op::Exp}, {"log", Op::Log},
        {"sqrt", Op::Sqrt}, {"abs", Op::Abs}, {"atan", Op::Atan}, {"pow", Op::Pow},
    };
    for (const auto& [n, op] : table)
        if (n == name) return op;
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) { advance(); }

    Expr parse_all() {
        Expr e = parse_sum();
        if (tok_.kind != Tok::End) syntax({"operator", "end of input"});
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    Token tok_{Tok::End, 0, {}};

    [[noreturn]] void syntax(std::vector<std::string> expected) const {
        std::string msg = "syntax error at byte " + std::to_string(tok_.offset) + ": unexpected " + describe(tok_) +
                          ", expected one of:";
        for (const auto& e : expected) msg += " " + e;
        throw ParseError(ParseError::Kind::Syntax, tok_.offset, std::move(expected), msg);
    }

    void lex_number(std::size_t start) {
        std::size_t i = start;
        auto digits = [&] {
            while (i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]))) ++i;
        };
        digits();
        if (i < src_.size() && src_[i] == '.') {
            ++i;
            digits();
        }
        if (i < src_.size() && (src_[i] == 'e' || src_[i] == 'E')) {
            std::size_t j = i + 1;
            if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
            if (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) {
                i = j;
                digits();
            }
        }
        const std::string_view text = src_.substr(start, i - start);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (text == "." || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
            tok_ = {Tok::Number, start, text};
            syntax({"finite number"});
        }
        tok_ = {Tok::Number, start, text, v};
        pos_ = i;
    }

    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ >= src_.size()) {
            tok_ = {Tok::End, src_.size(), {}};
            return;
        }
        const std::size_t start = pos_;
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(start);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            tok_ = {Tok::Ident, start, src_.substr(start, pos_ - start)};
            return;
        }
        Tok kind;
        switch (c) {
            case '+': kind = Tok::Plus; break;
            case '-': kind = Tok::Minus; break;
            case '*': kind = Tok::Star; break;
            case '/': kind = Tok::Slash; break;
            case '^': kind = Tok::Caret; break;
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            case ',': kind = Tok::Comma; break;
            default:
                tok_ = {Tok::Invalid, start, src_.substr(start, 1)};
                syntax({"number", "x", "function name", "operator", "(", ")"});
        }
        ++pos_;
        tok_ = {kind, start, src_.substr(start, 1)};
    }

    void expect(Tok kind, const char* what) {
        if (tok_.kind != kind) syntax({what});
        advance();
    }

    Expr parse_sum() {
        Expr lhs = parse_product();
        while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
            const Op op = tok_.kind == Tok::Plus ? Op::Add : Op::Sub;
            advance();
            lhs = Expr::binary(op, lhs, parse_product());
        }
        return lhs;
    }

    Expr parse_product() {
        Expr lhs = parse_unary();
        while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
            const Op op = tok_.kind == Tok::Star ? Op::Mul : Op::Div;
            advance();
            lhs = Expr::binary(op, lhs, parse_unary());
        }
        return lhs;
    }

    Expr parse_unary() {
        if (tok_.kind == Tok::Minus) {
            advance();
            return Expr::unary(Op::Neg, parse_unary());
        }
        if (tok_.kind == Tok::Plus) {
            advance();
            return parse_unary();
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (tok_.kind == Tok::Caret) {
            advance();
            return Expr::binary(Op::Pow, base, parse_unary());
        }
        return base;
    }

    Expr parse_primary() {
        switch (tok_.kind) {
            case Tok::Number: {
                const double v = tok_.number;
                advance();
                return Expr::constant(v);
            }
            case Tok::LParen: {
                advance();
                Expr inner = parse_sum();
                expect(Tok::RParen, ")");
                return inner;
            }
            case Tok::Ident: return parse_identifier();
            default: syntax({"number", "x", "function name", "("});
        }
    }

    Expr parse_identifier() {
        const Token id = tok_;
        advance();
        const auto fn = lookup_function(id.text);
        if (tok_.kind == Tok::LParen) {
            if (!fn) {
                throw ParseError(ParseError::Kind::UnknownFunction, id.offset, {"function name"},
                                 "unknown function '" + std::string(id.text) + "' at byte " +
                                     std::to_string(id.offset));
            }
            advance();
            Expr a = parse_sum();
            if (*fn == Op::Pow) {
                expect(Tok::Comma, ",");
                Expr b = parse_sum();
                expect(Tok::RParen, ")");
                return Expr::binary(Op::Pow, a, b);
            }
            expect(Tok::RParen, ")");
            return Expr::unary(*fn, a);
        }
        if (fn) {
            syntax({"("});
        }
        if (id.text == "x") return Expr::variable();
        if (id.text == "pi") return Expr::constant(std::numbers::pi);
        if (id.text == "e") return Expr::constant(std::numbers::e);
        throw ParseError(ParseError::Kind::UnknownVariable, id.offset, {"x"},
                         "unknown variable '" + std::string(id.text) + "' at byte " + std::to_string(id.offset));
    }
};

}  // namespace

Expr parse(std::string_view source) { return Parser(source).parse_all(); }

}  // namespace twoterm
