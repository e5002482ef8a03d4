#pragma once

#include "rodsim/rod_state.hpp"
#include "rodsim/solver.hpp"

namespace rodsim {

/// Geometry and drive of the rotating-helix experiment: M rods clamped at the
/// sites of a regular polygon, each driven by rotating its clamped edge's
/// material frame at angular speed omega.
struct FlagellaScenario {
    int numFlagella = 2;       // M
    double helixRadius = 0.01; // a [m]
    double helixPitch = 0.05;  // lambda [m]
    double axialLength = 0.2;  // z0 [m]
    double polygonSide = 0.03; // side length of the clamp polygon [m]
    double omega = 15.0;       // drive angular speed [rad/s]
    int nodesPerRod = 68;      // N
    bool rightHanded = true;
    double phase = 0.0;        // initial azimuthal phase, identical for all rods
};

/// Clamp location of rod `index` on the regular polygon (z = 0 plane).
Vec3 clamp_site(const FlagellaScenario& sc, int index);

/// Helical arc length implied by the pitch/radius/axial-extent parameters.
double helix_arc_length(const FlagellaScenario& sc);

/// Stress-free rod for one flagellum: nodes 0 and 1 sit on the helix axis
/// (the clamped edge), the remaining nodes lie on the helix itself with
/// uniform arc-length spacing.
RodState build_helix(const FlagellaScenario& sc, int index);

/// Prescribed DOF values at time t for one rod: the two clamp nodes hold
/// their built positions and the first twist DOF advances as omega * t.
struct ClampedDofs {
    Vec3 node0, node1;
    double theta0 = 0.0;
};
ClampedDofs boundary_schedule(const FlagellaScenario& sc, int index, double t);

/// Mark the clamped DOFs fixed and install the drive schedule.
void apply_flagella_boundary(Simulation& sim, const FlagellaScenario& sc);

} // namespace rodsim
