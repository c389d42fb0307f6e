#pragma once

#include <stdexcept>
#include <string>

namespace snbif {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed scenario text, missing/unknown keys, type mismatches, invariant violations.
class ParseError : public Error {
public:
    using Error::Error;
};

/// An argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A model-level precondition (coercivity, d-concavity) does not hold.
class ModelError : public Error {
public:
    using Error::Error;
};

/// Pullback horizon doubling ran out of budget before successive values agreed.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double previous, double last, double horizon)
        : Error(what), previous_value(previous), last_value(last), horizon(horizon) {}

    double previous_value;
    double last_value;
    double horizon;
};

/// A tracked invariant graph could not be re-anchored.
class TrackingLost : public Error {
public:
    TrackingLost(const std::string& what, double progress) : Error(what), progress(progress) {}

    double progress;  ///< fraction of the averaging window completed
};

/// A fiber solve ended early (blow-up or step floor) where a full trajectory was required.
class IntegrationFailure : public Error {
public:
    using Error::Error;
};

}  // namespace snbif
