#pragma once

#include <stdexcept>
#include <string>

namespace causalav {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Structural problems: duplicate ids, illegal bindings, bad merge keys.
struct GraphError : Error {
    using Error::Error;
};

/// Raised during evaluation: under-seeded recursion, unit mismatches,
/// off-grid times, type errors in structural equations.
struct EvalError : Error {
    using Error::Error;
};

/// File and format problems (CSV schema, scenario JSON, I/O failures).
struct IoError : Error {
    using Error::Error;
};

} // namespace causalav
