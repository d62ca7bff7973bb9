#pragma once

#include <stdexcept>
#include <string>

namespace qerr {

/// Operands disagree on the number of variables / bits.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the documented domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An internal consistency check failed. Never expected on valid input.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A brute-force enumeration would exceed its size budget.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed serialized input. `where` names the offending field.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(where) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

}  // namespace qerr
