#pragma once

#include <stdexcept>
#include <string>

namespace focklab {

/// Malformed input: non-finite entries, dimension mismatch, bad schema.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of the operation.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Boundedness was required but the symbol induces an unbounded operator.
class UnboundedError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Requested estimation method cannot handle the input.
class UnsupportedMethodError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested budget/dimension combination is not feasible.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Schema violation while parsing a JSON job; carries the offending path.
class SchemaError : public InputError {
public:
    SchemaError(const std::string& json_path, const std::string& msg)
        : InputError(msg + " (at " + json_path + ")"), path(json_path) {}
    std::string path;
};

}  // namespace focklab
