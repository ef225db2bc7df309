#pragma once

#include <stdexcept>
#include <string>

namespace cmbp {

/// Base class for all errors thrown by this library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// An API was called with arguments that violate its preconditions
/// (wrong store, unknown variable, malformed input, ...).
class usage_error : public error {
public:
    using error::error;
};

/// A semantic precondition on planning objects was violated
/// (empty initial belief state, empty goal, ...).
class contract_error : public error {
public:
    using error::error;
};

/// A configured capacity or bound was exhausted. The result of the
/// interrupted computation is inconclusive.
class resource_error : public error {
public:
    using error::error;
};

/// The requested operation is not supported by this implementation
/// (e.g. reordering variables once nodes exist).
class unsupported_error : public error {
public:
    using error::error;
};

/// An internal invariant failed. Always a bug.
class internal_error : public error {
public:
    using error::error;
};

} // namespace cmbp
