#pragma once

#include <stdexcept>
#include <string>

namespace sdmt {

// Base of every error raised by the toolkit. The CLI maps subclasses onto
// process exit codes, so keep the hierarchy flat.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user-facing parameters (antenna counts, trial counts, grids).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

// Configuration with n_e >= n_t: the zero-forcing scheme has no null space.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

class NumericalDegeneracyError : public Error {
public:
    using Error::Error;
};

class RankDeficiencyError : public Error {
public:
    using Error::Error;
};

class NotHermitianError : public Error {
public:
    using Error::Error;
};

class OptimizerError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

// Monte-Carlo slope estimate needs more trials; the message carries the
// observed failure counts.
class InsufficientFailuresError : public Error {
public:
    using Error::Error;
};

}  // namespace sdmt
