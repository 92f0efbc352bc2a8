#pragma once

#include <stdexcept>
#include <string>

namespace schottky {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// thrown when a derivative is requested at (or too close to) the pole -d/c
struct PoleError : Error {
    using Error::Error;
};

// distortion factor is undefined when the preimage of infinity lies in the interval
struct PoleInIntervalError : Error {
    using Error::Error;
};

struct PreconditionError : Error {
    using Error::Error;
};

struct EmptyWordError : Error {
    using Error::Error;
};

// enumeration or matrix size exceeded a configured cap
struct BudgetError : Error {
    using Error::Error;
};

struct ConvergenceError : Error {
    using Error::Error;
};

struct NonElementaryError : Error {
    using Error::Error;
};

// quadrature resolution too coarse for the requested frequency; retry with smaller tau
struct RefineError : Error {
    RefineError(const std::string& msg, double suggested_tau)
        : Error(msg), suggested_tau(suggested_tau) {}
    double suggested_tau;
};

struct DomainError : Error {
    using Error::Error;
};

struct NoAdmissibleWordsError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace schottky
