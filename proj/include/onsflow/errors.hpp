#pragma once

#include <stdexcept>
#include <string>

namespace onsflow {

// Violated precondition or shape/layout mismatch between fields.
struct ContractError : std::runtime_error {
    explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

// A linear solve failed to reach its residual contract.
struct SolverError : std::runtime_error {
    SolverError(const std::string& what, int iterations, double residual)
        : std::runtime_error(what), iterations(iterations), final_residual(residual) {}
    int iterations;
    double final_residual;
};

// Near-singular denominator in the auxiliary-scalar closure; the step size is
// too large for the closed-form update to be well defined.
struct StepSizeError : std::runtime_error {
    explicit StepSizeError(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration text; message carries the offending key and line.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace onsflow
