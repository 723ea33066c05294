#pragma once

#include <stdexcept>
#include <string>

namespace svocsim {

// Raised for bad scenario/config input (CLI exit code 3).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a simulation cannot proceed (CLI exit code 1).
struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Reference pair too small to define a frame direction.
struct DegenerateReference : SimulationError {
    explicit DegenerateReference(double mag)
        : SimulationError("reference magnitude " + std::to_string(mag) +
                          " V is below the 1e-6 V frame floor") {}
};

// Fault-phase bookkeeping violated (estimator supports 1 or 2 faulty phases).
struct WrongFaultCount : SimulationError {
    explicit WrongFaultCount(int n)
        : SimulationError("feedback estimator cannot handle " + std::to_string(n) +
                          " faulty phases") {}
};

// Two grid events touch the same phase over overlapping time windows.
struct OverlappingEvents : ConfigError {
    OverlappingEvents()
        : ConfigError("two grid events scale the same phase over overlapping windows") {}
};

// Acceptance evaluation was handed an incomplete result set.
struct MissingScenario : std::runtime_error {
    explicit MissingScenario(const std::string& name)
        : std::runtime_error("required scenario result missing: " + name) {}
};

// A measurement entering the controller was NaN/Inf.
struct NonFiniteSample : SimulationError {
    using SimulationError::SimulationError;
};

} // namespace svocsim
