#pragma once

#include <stdexcept>
#include <string>

namespace qlab {

/// Malformed or out-of-contract input (composite modulus, non-primitive form,
/// dimension mismatch, non-unit where a unit is required).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A configured enumeration or modulus ceiling would be exceeded.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A constructive step (Hensel start, witness search) could not be completed.
class ConstructionFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qlab
