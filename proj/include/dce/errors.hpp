#pragma once

#include <stdexcept>
#include <string>

namespace dce {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid construction parameters (cavity, basis, integration or sweep config).
class ConfigError : public Error {
public:
    using Error::Error;
};

// omega^2 <= 0: parameters left the perturbative regime.
class NonPositiveFrequency : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

class StepSizeUnderflow : public Error {
public:
    using Error::Error;
};

class ToleranceNotMet : public Error {
public:
    using Error::Error;
};

// The configuration does not satisfy the requested resonance equation,
// or satisfies more than one at once.
class NotOnResonance : public Error {
public:
    using Error::Error;
};

// A resonance equation has no positive cavity length.
class NoSolution : public Error {
public:
    using Error::Error;
};

}  // namespace dce
