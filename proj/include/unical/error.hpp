#ifndef UNICAL_ERROR_HPP
#define UNICAL_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace unical {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A ratio with a zero or negative component, or an unreadable ratio literal.
class InvalidRatio : public Error {
public:
    using Error::Error;
};

/// A prefix, unit or dimension symbol that the unit system does not register.
class UnknownSymbol : public Error {
public:
    UnknownSymbol(std::string kind, std::string symbol)
        : Error("unknown " + kind + " '" + symbol + "'"), kind_(std::move(kind)), symbol_(std::move(symbol))
    {
    }

    const std::string &kind() const noexcept { return kind_; }
    const std::string &symbol() const noexcept { return symbol_; }

private:
    std::string kind_;
    std::string symbol_;
};

/// Syntax error in a unit expression or registry document. Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string &message, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line), column_(column)
    {
    }

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Semantically invalid registry content or rule set (dimension mismatch, duplicate rule, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Raised when rewriting is requested for rules whose dependency order has a cycle.
class NotWellDefining : public Error {
public:
    using Error::Error;
};

} // namespace unical

#endif
