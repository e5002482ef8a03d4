#include "rodsim/scenario.hpp"

#include <cmath>

namespace rodsim {

Vec3 clamp_site(const FlagellaScenario& sc, int index)
{
    if (sc.numFlagella == 1)
        return Vec3::Zero();
    const double circumradius = sc.polygonSide / (2.0 * std::sin(M_PI / sc.numFlagella));
    const double angle = 2.0 * M_PI * index / sc.numFlagella;
    return Vec3(circumradius * std::cos(angle), circumradius * std::sin(angle), 0.0);
}

double helix_arc_length(const FlagellaScenario& sc)
{
    const double turns = sc.axialLength / sc.helixPitch;
    const double circumference = 2.0 * M_PI * sc.helixRadius;
    return turns * std::sqrt(sc.helixPitch * sc.helixPitch + circumference * circumference);
}

RodState build_helix(const FlagellaScenario& sc, int index)
{
    const Vec3 site = clamp_site(sc, index);
    const int n = sc.nodesPerRod;
    const double sweep = 2.0 * M_PI * sc.axialLength / sc.helixPitch;
    const double handed = sc.rightHanded ? 1.0 : -1.0;

    // all nodes on the helix; the clamped leading edge is its first chord,
    // rotated in place about the helix axis through the twist drive
    std::vector<Vec3> nodes(n);
    for (int k = 0; k < n; ++k) {
        const double phi = sweep * k / (n - 1);
        nodes[k] = site
            + Vec3(sc.helixRadius * std::cos(sc.phase + handed * phi),
                   sc.helixRadius * std::sin(sc.phase + handed * phi),
                   sc.helixPitch * phi / (2.0 * M_PI));
    }
    return RodState::fromRestShape(std::move(nodes));
}

ClampedDofs boundary_schedule(const FlagellaScenario& sc, int index, double t)
{
    const RodState built = build_helix(sc, index);
    ClampedDofs c;
    c.node0 = built.node(0);
    c.node1 = built.node(1);
    c.theta0 = sc.omega * t;
    return c;
}

void apply_flagella_boundary(Simulation& sim, const FlagellaScenario& sc)
{
    struct Clamp {
        int offset;
        Vec3 node0, node1;
    };
    std::vector<Clamp> clamps;
    for (int r = 0; r < sim.numRods(); ++r) {
        sim.fixNode(r, 0);
        sim.fixNode(r, 1);
        sim.fixTheta(r, 0);
        clamps.push_back({sim.rodDofOffset(r), sim.rod(r).node(0), sim.rod(r).node(1)});
    }
    const double omega = sc.omega;
    sim.setBoundaryFn([clamps, omega](double t, VecX& q) {
        for (const Clamp& c : clamps) {
            q.segment<3>(c.offset) = c.node0;
            q.segment<3>(c.offset + 4) = c.node1;
            q[c.offset + 3] = omega * t;
        }
    });
}

} // namespace rodsim
