#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bergman {

// Base of every library error. The CLI maps NumericError to exit code 3 and
// ConfigError to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numeric contract (spectrum range, pivot size, domain membership) failed.
class NumericError : public Error {
public:
    using Error::Error;
};

class ContractViolation : public NumericError {
public:
    using NumericError::NumericError;
};

class SingularMatrixError : public NumericError {
public:
    SingularMatrixError(const std::string& what, double condition_estimate)
        : NumericError(what), condition_estimate_(condition_estimate) {}
    double condition_estimate() const noexcept { return condition_estimate_; }

private:
    double condition_estimate_;
};

class ConvergenceError : public NumericError {
public:
    using NumericError::NumericError;
};

class PoleError : public NumericError {
public:
    using NumericError::NumericError;
};

class DomainError : public NumericError {
public:
    using NumericError::NumericError;
};

// Palm measure requested at a tuple whose correlation vanishes.
class UndefinedPalmError : public NumericError {
public:
    using NumericError::NumericError;
};

// Conditioning on an event of (numerically) zero probability.
class ZeroProbabilityError : public NumericError {
public:
    using NumericError::NumericError;
};

// Strassen feasibility failed; `up_set` holds configuration bitmasks of an
// up-set U with P_lower(U) > P_upper(U).
class DominationViolated : public NumericError {
public:
    DominationViolated(const std::string& what, std::vector<unsigned> up_set, double excess)
        : NumericError(what), up_set_(std::move(up_set)), excess_(excess) {}
    const std::vector<unsigned>& up_set() const noexcept { return up_set_; }
    double excess() const noexcept { return excess_; }

private:
    std::vector<unsigned> up_set_;
    double excess_;
};

// Spectrum clamping moved more than 10% of the trace: the grid is too coarse
// for the kernel.
class CoarseGridError : public NumericError {
public:
    using NumericError::NumericError;
};

// The resolvent (I - K_{W^c W^c})^-1 of a conditional kernel does not exist.
class DegenerateGeometryError : public NumericError {
public:
    using NumericError::NumericError;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace bergman
