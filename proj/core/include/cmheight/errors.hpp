#pragma once

#include <stdexcept>
#include <string>

namespace cmheight {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Evaluation pole (for example zeta at s = 1).
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

// A validated error bound could not be met at the configured depth.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An internal identity that must hold exactly (or to eps) was violated.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace cmheight
