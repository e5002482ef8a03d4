#include <catch2/catch_amalgamated.hpp>

#include "rodsim/config.hpp"
#include "rodsim/elastic_forces.hpp"
#include "rodsim/scenario.hpp"

using namespace rodsim;
using Catch::Approx;

TEST_CASE("helix construction", "[scenario]")
{
    FlagellaScenario sc; // paper-default geometry

    SECTION("axial extent of four pitches sweeps eight pi")
    {
        REQUIRE(sc.axialLength / sc.helixPitch == Approx(4.0));
        const RodState rod = build_helix(sc, 0);
        // accumulate the azimuthal angle along the helix nodes
        const Vec3 site = clamp_site(sc, 0);
        double sweep = 0.0;
        double prev = std::atan2(rod.node(0).y() - site.y(), rod.node(0).x() - site.x());
        for (int i = 1; i < rod.numNodes(); ++i) {
            double a = std::atan2(rod.node(i).y() - site.y(), rod.node(i).x() - site.x());
            double d = a - prev;
            while (d > M_PI)
                d -= 2.0 * M_PI;
            while (d < -M_PI)
                d += 2.0 * M_PI;
            sweep += d;
            prev = a;
        }
        REQUIRE(std::abs(sweep) == Approx(8.0 * M_PI).epsilon(1e-9));
        REQUIRE(sweep > 0.0); // right-handed
        // axial extent covered
        REQUIRE(rod.node(rod.numNodes() - 1).z() - rod.node(0).z()
                == Approx(sc.axialLength).epsilon(1e-12));
    }
    SECTION("every node sits exactly on the helix cylinder")
    {
        const RodState rod = build_helix(sc, 1);
        const Vec3 site = clamp_site(sc, 1);
        for (int i = 0; i < rod.numNodes(); ++i) {
            const double r = std::hypot(rod.node(i).x() - site.x(), rod.node(i).y() - site.y());
            REQUIRE(std::abs(r - sc.helixRadius) <= 1e-12);
        }
    }
    SECTION("summed helix edge lengths match the arc-length formula")
    {
        REQUIRE(sc.nodesPerRod == 68);
        const RodState rod = build_helix(sc, 0);
        double sum = 0.0;
        for (int e = 0; e < rod.numEdges(); ++e) // chords between helix nodes
            sum += rod.edgeLength(e);
        const double arc = (sc.axialLength / sc.helixPitch)
            * std::sqrt(sc.helixPitch * sc.helixPitch
                        + std::pow(2.0 * M_PI * sc.helixRadius, 2));
        REQUIRE(std::abs(sum - arc) / arc < 0.005);
    }
    SECTION("built rod is stress free")
    {
        const RodState rod = build_helix(sc, 0);
        const MaterialParams mat = MaterialParams::circular(3e6, 1e6, 1000.0, 1e-3);
        REQUIRE(elastic_energy(rod, mat).total() == Approx(0.0).margin(1e-18));
        REQUIRE(internal_forces(rod, mat).norm() == Approx(0.0).margin(1e-12));
    }
    SECTION("left handedness mirrors the sweep")
    {
        FlagellaScenario lh = sc;
        lh.rightHanded = false;
        const RodState rod = build_helix(lh, 0);
        const Vec3 site = clamp_site(lh, 0);
        double a0 = std::atan2(rod.node(0).y() - site.y(), rod.node(0).x() - site.x());
        double a1 = std::atan2(rod.node(1).y() - site.y(), rod.node(1).x() - site.x());
        double d = a1 - a0;
        while (d > M_PI)
            d -= 2.0 * M_PI;
        while (d < -M_PI)
            d += 2.0 * M_PI;
        REQUIRE(d < 0.0);
    }
}

TEST_CASE("boundary schedule", "[scenario]")
{
    FlagellaScenario sc;

    SECTION("time zero leaves the initial configuration unchanged")
    {
        const RodState rod = build_helix(sc, 0);
        const ClampedDofs c = boundary_schedule(sc, 0, 0.0);
        REQUIRE((c.node0 - rod.node(0)).norm() == 0.0);
        REQUIRE((c.node1 - rod.node(1)).norm() == 0.0);
        REQUIRE(c.theta0 == 0.0);
    }
    SECTION("one rotation period advances the twist by exactly two pi")
    {
        const double period = 2.0 * M_PI / sc.omega;
        const ClampedDofs c = boundary_schedule(sc, 0, period);
        REQUIRE(c.theta0 == Approx(2.0 * M_PI).epsilon(1e-14));
    }
    SECTION("three clamp sites are pairwise one polygon side apart")
    {
        FlagellaScenario tri = sc;
        tri.numFlagella = 3;
        tri.polygonSide = 0.03;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b)
                REQUIRE((clamp_site(tri, a) - clamp_site(tri, b)).norm()
                        == Approx(0.03).epsilon(1e-12));
    }
    SECTION("two sites sit a polygon side apart")
    {
        REQUIRE((clamp_site(sc, 0) - clamp_site(sc, 1)).norm() == Approx(sc.polygonSide));
    }
}

TEST_CASE("paper default parameter set", "[scenario]")
{
    const SimConfig cfg; // defaults
    REQUIRE(cfg.youngsModulus == 3.0e6);
    REQUIRE(cfg.poissonRatio == 0.5);
    REQUIRE(cfg.shearModulus() == Approx(1.0e6));
    REQUIRE(cfg.density == 1000.0);
    REQUIRE(cfg.radius == 1.0e-3);
    REQUIRE(cfg.viscosity == 0.1);
    REQUIRE(cfg.scenario.nodesPerRod == 68);
    REQUIRE(cfg.dt == 1.0e-3);
    REQUIRE(cfg.scenario.omega == 15.0);
    REQUIRE(cfg.scenario.polygonSide == 0.03);
    REQUIRE(cfg.scenario.helixRadius == 0.01);
    REQUIRE(cfg.scenario.helixPitch == 0.05);
    REQUIRE(cfg.scenario.axialLength == 0.2);
    REQUIRE(cfg.rssParams().epsilon == Approx(1.02e-3));
    REQUIRE(cfg.contactParams().K1() == Approx(15.0 * cfg.radius / cfg.delta()));
    REQUIRE(cfg.frictionParams().K2() == Approx(15.0 / cfg.nu));
    // derived circular-section properties
    const MaterialParams m = cfg.materialParams();
    REQUIRE(m.area == Approx(M_PI * 1e-6));
    REQUIRE(m.I1 == Approx(M_PI * 1e-12 / 4.0));
    REQUIRE(m.I2 == m.I1);
    REQUIRE(m.polarJ == Approx(M_PI * 1e-12 / 2.0));
}
