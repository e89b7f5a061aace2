#pragma once

#include <stdexcept>
#include <string>

namespace srgm {

/// Malformed or degenerate input: bad CSV rows, empty datasets, violated
/// parameter invariants. Maps to exit code 2 in the CLI.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation (negative time,
/// release time beyond the life cycle, zero optimum in a deviation).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A computation produced a non-finite value.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace srgm
