// errors.hpp
// Exception hierarchy shared by every layer of the library.

#pragma once

#include <stdexcept>
#include <string>

namespace bayesphase {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid numeric argument (width out of range, non-integer N/delta, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Malformed or contradictory experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Generator kind and mode count do not match.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

// Operation not defined for this kind of state or probe.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

// Fock cutoff too small for the norm-deficit policy.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, double deficit)
        : Error(what), deficit_(deficit) {}
    double deficit() const { return deficit_; }

private:
    double deficit_;
};

// Underflow, non-convergence or other numerical breakdown.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Argument outside the domain covered by a grid.
class RangeError : public Error {
public:
    using Error::Error;
};

// Data does not match the table it refers to (unknown outcome, ...).
class InconsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace bayesphase
