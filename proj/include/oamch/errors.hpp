#pragma once

#include <stdexcept>
#include <string>

namespace oamch {

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input outside the validity range of a closed-form expression.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// All coincidence amplitudes vanish, so no normalized state exists.
class DegenerateState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientStatistics : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace oamch
