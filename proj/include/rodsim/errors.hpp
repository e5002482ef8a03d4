#pragma once

#include <stdexcept>
#include <string>

namespace rodsim {

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Consecutive edges turned by ~pi; the curvature binormal denominator vanished.
struct AntiparallelEdges : SimError {
    using SimError::SimError;
};

/// An edge collapsed below the minimum usable length.
struct DegenerateEdge : SimError {
    using SimError::SimError;
};

/// Two edge centerlines crossed (scaled distance <= 0); the step cannot proceed.
struct NonPositiveDistance : SimError {
    using SimError::SimError;
};

struct SingularMobility : SimError {
    using SimError::SimError;
};

struct SingularJacobian : SimError {
    using SimError::SimError;
};

struct ShapeMismatch : SimError {
    using SimError::SimError;
};

struct MissingForceLog : SimError {
    using SimError::SimError;
};

struct ConfigError : SimError {
    using SimError::SimError;
};

struct IoError : SimError {
    using SimError::SimError;
};

} // namespace rodsim
