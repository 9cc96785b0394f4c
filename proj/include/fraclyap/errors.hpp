#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fraclyap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (alpha out of range, short grid, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical evaluation could not deliver the requested accuracy.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// A time stepper produced a non-finite state.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::size_t step)
        : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// An implicit corrector failed to reach its tolerance within the iteration budget.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::size_t step)
        : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace fraclyap
