#pragma once

#include <stdexcept>
#include <string>

namespace gwsep {

/// Malformed or out-of-range input (bad dimensions, labels, margins, files).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation would exceed a configured size cap.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A generation request cannot be satisfied geometrically.
class Infeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs claimed to be separable turned out not to be.
class VerificationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gwsep
