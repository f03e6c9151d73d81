#pragma once

#include <stdexcept>
#include <string>

namespace detnodes {

/// Violated precondition on an argument (bad extent, index, exponent, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Fields or trajectories living on different grids / sample times.
class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The explicit nonlinear term overflowed or produced a non-finite value.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}

    double time() const { return time_; }

private:
    double time_;
};

/// Iterative solve failed in a way that is not a plain iteration cap.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Continuation could not locate the requested stationary solution.
class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace detnodes
