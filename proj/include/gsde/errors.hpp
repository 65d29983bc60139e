#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gsde {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration: bad intervals, counts, schedules. CLI exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

// API misuse: empty inputs, mismatched grids, mixed scenario indices.
struct UsageError : Error {
    using Error::Error;
};

// Argument outside its mathematical domain (theta outside the parameter set,
// moment order below the supported range).
struct DomainError : Error {
    using Error::Error;
};

// Estimation failed: non-finite objective on the search grid or a
// non-finite statistic along a path.
struct EstimationError : Error {
    using Error::Error;
};

// Sample path with a zero denominator in the closed-form estimator.
struct DegeneratePathError : Error {
    using Error::Error;
};

// Path state left the guarded range during simulation. Carries the 1-based
// step index at which the guard tripped. CLI exit code 3.
class SimulationDiverged : public Error {
public:
    SimulationDiverged(std::size_t step, const std::string& what)
        : Error(what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace gsde
