#pragma once

#include <optional>
#include <string>

#include "rodsim/contact_model.hpp"
#include "rodsim/friction_model.hpp"
#include "rodsim/hydrodynamics.hpp"
#include "rodsim/scenario.hpp"
#include "rodsim/solver.hpp"

namespace rodsim {

/// Full simulation configuration: material, contact, friction, fluid, solver,
/// scenario, and run settings. Parsed from `key = value` sections; unknown
/// sections or keys are rejected.
struct SimConfig {
    // [material]
    double youngsModulus = 3.0e6; // [Pa]
    double poissonRatio = 0.5;
    double density = 1000.0; // [kg/m^3]
    double radius = 1.0e-3;  // h [m]

    // [contact]; the distance tolerance may be given scaled (delta_over_h,
    // the paper's unitless reading) or in meters (delta); not both
    double deltaOverH = 1.0e-2;
    std::optional<double> deltaMeters;
    double candidateMarginOverH = 1.0; // deltaHat / h; covers fast whirling transients
    double stiffnessScale = 1.0e5;     // s

    // [friction]
    double mu = 0.0;
    double nu = 1.0e-4; // [m/s]

    // [fluid]
    bool fluidEnabled = true;
    double viscosity = 0.1;      // [Pa s]
    double epsilonFactor = 1.02; // epsilon / h

    // [solver]
    double dt = 1.0e-3; // [s]
    SolverParams solver;

    // [scenario]
    FlagellaScenario scenario;

    // [run]
    double duration = 0.0; // [s]
    std::string outDir;
    int stride = 10;       // steps per trajectory record
    unsigned seed = 0;     // reserved

    double shearModulus() const { return youngsModulus / (2.0 * (1.0 + poissonRatio)); }
    double delta() const { return deltaMeters ? *deltaMeters : deltaOverH * radius; }

    MaterialParams materialParams() const;
    ContactParams contactParams() const;
    FrictionParams frictionParams() const;
    RssParams rssParams() const;

    /// Validates positivity/consistency; throws ConfigError naming the field.
    void validate() const;

    /// Serialized back in the same section/key format.
    std::string toText() const;
};

/// Parse a configuration file; unknown keys are rejected with the offending
/// field named. Fields not present keep their defaults.
SimConfig parse_config_file(const std::string& path);
SimConfig parse_config_text(const std::string& text);

} // namespace rodsim
