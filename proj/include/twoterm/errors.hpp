#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace twoterm {

class ParseError : public std::runtime_error {
public:
    enum class Kind { Syntax, UnknownFunction, UnknownVariable };

    ParseError(Kind kind, std::size_t offset, std::vector<std::string> expected, const std::string& what)
        : std::runtime_error(what), kind_(kind), offset_(offset), expected_(std::move(expected)) {}

    Kind kind() const { return kind_; }
    /// Byte offset into the source where parsing stopped.
    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    Kind kind_;
    std::size_t offset_;
    std::vector<std::string> expected_;
};

/// Raised when an expression or a derived quantity cannot be evaluated at a point.
class EvalError : public std::runtime_error {
public:
    enum class Kind { Domain, NonFinite, Underflow, Degenerate, Precision };

    EvalError(Kind kind, std::string subexpression, const std::string& what)
        : std::runtime_error(what), kind_(kind), subexpression_(std::move(subexpression)) {}

    Kind kind() const { return kind_; }
    const std::string& subexpression() const { return subexpression_; }

private:
    Kind kind_;
    std::string subexpression_;
};

/// Misuse of a numerical routine, or a sampled function that fails too often.
class NumericsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace twoterm
