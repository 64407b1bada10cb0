#pragma once

#include <stdexcept>
#include <string>

namespace qsc {

// Base class for every error this library raises on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed value handed to an operation (non-finite input, zero axis, ...).
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

// An operation hit a configuration where it is mathematically undefined,
// e.g. inverting T(q) with |q0| at or below the conditioning threshold.
class SingularityError : public Error {
public:
    using Error::Error;
};

// Point lies outside the domain of a potential function (non-PD embedding
// for the log-det potential, non-PD Gamma for the quadratic one).
class DomainError : public Error {
public:
    using Error::Error;
};

// Parameter estimate left the physically consistent set and step refinement
// could not repair it.
class EstimateInvalidError : public Error {
public:
    using Error::Error;
};

// Scenario configuration is unusable: unknown key, bad value, inconsistent
// controller/sliding-variable combination.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Integration produced a non-finite derivative. Carries the time at which
// the stage blew up and, once the simulation loop has seen it, the step index.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, double t, long step = -1)
        : Error(what), t_(t), step_(step) {}
    double t() const { return t_; }
    long step() const { return step_; }

private:
    double t_;
    long step_;
};

} // namespace qsc
