#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace attractor {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad configuration or violated precondition. The CLI maps this to exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A vector field evaluated outside the set where it is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

// Non-finite value produced inside a Runge-Kutta stage (1..4).
class StageError : public Error {
public:
    StageError(int stage, const std::string& what) : Error(what), stage_(stage) {}
    int stage() const noexcept { return stage_; }

private:
    int stage_;
};

// The mean-value filter discarded every active box.
class ExtinctionError : public Error {
public:
    using Error::Error;
};

// Too many trajectories blew up in one iteration; the domain likely misses the absorbing set.
class BlowupBudgetError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace attractor
