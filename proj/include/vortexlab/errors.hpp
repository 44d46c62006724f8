#pragma once

#include <stdexcept>
#include <string>

namespace vortexlab {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A mode-1 forcing fails the moment condition required to invert the
// advection operator on that subspace.
struct SolvabilityViolation : Error {
    using Error::Error;
};

// An iterative solve (boundary-value problem, steady-state iteration)
// did not reach its tolerance.
struct ConvergenceFailure : Error {
    using Error::Error;
};

struct UnknownKind : Error {
    using Error::Error;
};

struct StepSizeUnderflow : Error {
    using Error::Error;
};

struct UnderResolved : Error {
    using Error::Error;
};

struct CFLViolation : Error {
    using Error::Error;
};

struct ZeroCirculation : Error {
    using Error::Error;
};

struct WeightOverflowRisk : Error {
    using Error::Error;
};

struct InsufficientDecay : Error {
    using Error::Error;
};

struct NoDecayDetected : Error {
    using Error::Error;
};

struct StepInstability : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct RunError : Error {
    using Error::Error;
};

struct MissingArtifacts : Error {
    using Error::Error;
};

} // namespace vortexlab
