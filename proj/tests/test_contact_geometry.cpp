#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rodsim/contact_geometry.hpp"

#include "oracles.hpp"

using namespace rodsim;
using Catch::Approx;

namespace {

struct EdgePair {
    Vec3 xi, xi1, xj, xj1;
};

EdgePair randomPair(std::mt19937& rng, double spread = 2.0)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    EdgePair p;
    p.xi = spread * Vec3(u(rng), u(rng), u(rng));
    p.xi1 = p.xi + Vec3(u(rng), u(rng), u(rng)) * (0.5 + std::abs(u(rng)));
    p.xj = spread * Vec3(u(rng), u(rng), u(rng));
    p.xj1 = p.xj + Vec3(u(rng), u(rng), u(rng)) * (0.5 + std::abs(u(rng)));
    return p;
}

/// Dense-sampling oracle: minimum of the pair distance over a uniform
/// (betaI, betaJ) grid.
double gridMinDistance(const EdgePair& p, int resolution)
{
    const Vec3 d1 = p.xi1 - p.xi;
    const Vec3 d2 = p.xj1 - p.xj;
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a <= resolution; ++a) {
        const double bi = static_cast<double>(a) / resolution;
        const Vec3 ci = p.xi + bi * d1;
        for (int b = 0; b <= resolution; ++b) {
            const double bj = static_cast<double>(b) / resolution;
            best = std::min(best, (ci - (p.xj + bj * d2)).norm());
        }
    }
    return best;
}

double kindDistance(const DistanceResult& r, const EdgePair& p)
{
    switch (r.kind) {
    case DistanceKind::PointPoint:
        return distance_pp(r.closestI, r.closestJ);
    case DistanceKind::PointEdge: {
        // figure out which side has the interior ratio
        const bool iInterior = r.betaI > 0.0 && r.betaI < 1.0;
        if (iInterior)
            return distance_pe(p.xi, p.xi1, r.closestJ);
        return distance_pe(p.xj, p.xj1, r.closestI);
    }
    case DistanceKind::EdgeEdge:
        return distance_ee(p.xi, p.xi1, p.xj, p.xj1);
    }
    return -1.0;
}

} // namespace

TEST_CASE("distance formulas", "[contact-geometry]")
{
    SECTION("point-point")
    {
        REQUIRE(distance_pp(Vec3(0, 0, 0), Vec3(3, 4, 0)) == Approx(5.0));
        REQUIRE(distance_pp(Vec3(1, 2, 3), Vec3(1, 2, 3)) == 0.0);
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        for (int k = 0; k < 100; ++k) {
            const Vec3 a(u(rng), u(rng), u(rng)), b(u(rng), u(rng), u(rng));
            const double dx = a.x() - b.x(), dy = a.y() - b.y(), dz = a.z() - b.z();
            REQUIRE(distance_pp(a, b) == Approx(std::sqrt(dx * dx + dy * dy + dz * dz)).epsilon(1e-14));
        }
    }
    SECTION("point-edge")
    {
        REQUIRE(distance_pe(Vec3(-1, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)) == Approx(1.0));
        REQUIRE(distance_pe(Vec3(-1, 0, 0), Vec3(1, 0, 0), Vec3(0.3, 0, 0)) == Approx(0.0).margin(1e-14));
        REQUIRE_THROWS_AS(distance_pe(Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(1, 0, 0)), DegenerateEdge);
        // random valid PE configurations against the sampling oracle
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int k = 0; k < 40; ++k) {
            const Vec3 a(u(rng), u(rng), u(rng));
            const Vec3 b = a + Vec3(1.5 + u(rng), u(rng), u(rng));
            // point whose foot is interior
            const double foot = 0.2 + 0.6 * std::abs(u(rng));
            const Vec3 dir = (b - a).cross(Vec3(0.1, 1.0, 0.2)).normalized();
            const Vec3 c = a + foot * (b - a) + (0.5 + std::abs(u(rng))) * dir;
            double best = std::numeric_limits<double>::infinity();
            for (int g = 0; g <= 4000; ++g) {
                const Vec3 p = a + (b - a) * (static_cast<double>(g) / 4000);
                best = std::min(best, (p - c).norm());
            }
            REQUIRE(distance_pe(a, b, c) == Approx(best).epsilon(1e-6));
        }
    }
    SECTION("edge-edge")
    {
        REQUIRE(distance_ee(Vec3(-1, 0, 0), Vec3(1, 0, 0), Vec3(0, -1, 0.7), Vec3(0, 1, 0.7))
                == Approx(0.7));
        REQUIRE(distance_ee(Vec3(-1, 0, 0), Vec3(1, 0, 0), Vec3(0, -1, 0), Vec3(0, 1, 0))
                == Approx(0.0).margin(1e-14));
        REQUIRE_THROWS_AS(distance_ee(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(2, 1, 0)),
                          ParallelEdges);
        std::mt19937 rng(13);
        for (int k = 0; k < 40; ++k) {
            EdgePair p = randomPair(rng, 0.5);
            DistanceResult r = classify_and_beta(p.xi, p.xi1, p.xj, p.xj1);
            if (r.kind != DistanceKind::EdgeEdge)
                continue;
            REQUIRE(distance_ee(p.xi, p.xi1, p.xj, p.xj1)
                    == Approx(gridMinDistance(p, 1000)).margin(1e-5));
        }
    }
}

TEST_CASE("classification", "[contact-geometry]")
{
    SECTION("crossing perpendicular skew edges")
    {
        const DistanceResult r = classify_and_beta(Vec3(-1, 0, 0), Vec3(1, 0, 0),
                                                   Vec3(0.2, -1, 0.4), Vec3(0.2, 1, 0.4));
        REQUIRE(r.kind == DistanceKind::EdgeEdge);
        REQUIRE(r.betaI > 0.0);
        REQUIRE(r.betaI < 1.0);
        REQUIRE(r.betaJ > 0.0);
        REQUIRE(r.betaJ < 1.0);
        REQUIRE(r.distance == Approx(0.4));
        REQUIRE(r.betaI == Approx(0.6));
        REQUIRE(r.betaJ == Approx(0.5));
    }
    SECTION("edges pointing away from each other")
    {
        const DistanceResult r = classify_and_beta(Vec3(0, 0, 0), Vec3(-1, 0, 0),
                                                   Vec3(2, 0.2, 0), Vec3(3, 0.4, 0));
        REQUIRE(r.kind == DistanceKind::PointPoint);
        REQUIRE(r.betaI == 0.0);
        REQUIRE(r.betaJ == 0.0);
        REQUIRE(r.distance == Approx((Vec3(2, 0.2, 0)).norm()));
    }
    SECTION("random pairs match the dense-sampling oracle")
    {
        std::mt19937 rng(17);
        const int res = 1000;
        for (int k = 0; k < 60; ++k) {
            const EdgePair p = randomPair(rng);
            const DistanceResult r = classify_and_beta(p.xi, p.xi1, p.xj, p.xj1);
            const double gridMin = gridMinDistance(p, res);
            const double lip = ((p.xi1 - p.xi).norm() + (p.xj1 - p.xj).norm()) * 0.5 / res;
            REQUIRE(r.distance <= gridMin + 1e-12);
            REQUIRE(gridMin <= r.distance + lip);
        }
    }
    SECTION("classification consistency: kind formula reproduces the closest-point distance")
    {
        std::mt19937 rng(19);
        for (int k = 0; k < 500; ++k) {
            const EdgePair p = randomPair(rng);
            const DistanceResult r = classify_and_beta(p.xi, p.xi1, p.xj, p.xj1);
            REQUIRE(kindDistance(r, p) == Approx(r.distance).margin(1e-10 * (1.0 + r.distance)));
            REQUIRE((r.closestI - r.closestJ).norm()
                    == Approx(r.distance).epsilon(1e-12).margin(1e-300));
        }
    }
    SECTION("symmetry under pair swap")
    {
        std::mt19937 rng(23);
        for (int k = 0; k < 200; ++k) {
            const EdgePair p = randomPair(rng);
            const DistanceResult r = classify_and_beta(p.xi, p.xi1, p.xj, p.xj1);
            const DistanceResult rs = classify_and_beta(p.xj, p.xj1, p.xi, p.xi1);
            REQUIRE(rs.distance == Approx(r.distance).epsilon(1e-12).margin(1e-15));
            REQUIRE(rs.kind == r.kind);
        }
    }
    SECTION("near-parallel pairs take the clamping path deterministically")
    {
        // two parallel overlapping unit edges at gap 0.3
        const DistanceResult r = classify_and_beta(Vec3(0, 0, 0), Vec3(1, 0, 0),
                                                   Vec3(0, 0.3, 0), Vec3(1, 0.3, 0));
        REQUIRE(r.distance == Approx(0.3));
        REQUIRE(r.betaI == Approx(0.5));
        REQUIRE(r.betaJ == Approx(0.5));
        // shifted overlap
        const DistanceResult r2 = classify_and_beta(Vec3(0, 0, 0), Vec3(1, 0, 0),
                                                    Vec3(0.8, 0.3, 0), Vec3(1.8, 0.3, 0));
        REQUIRE(r2.distance == Approx(0.3));
        REQUIRE(r2.betaI >= 0.8);
        REQUIRE(r2.betaJ <= 0.2);
        // disjoint projections degenerate to point-point
        const DistanceResult r3 = classify_and_beta(Vec3(0, 0, 0), Vec3(1, 0, 0),
                                                    Vec3(2, 0.3, 0), Vec3(3, 0.3, 0));
        REQUIRE(r3.kind == DistanceKind::PointPoint);
        REQUIRE(r3.distance == Approx(std::sqrt(1.0 + 0.09)));
    }
}

TEST_CASE("candidate and contact sets", "[contact-geometry]")
{
    const double h = 0.01; // edge spacing below stays well above 2h + margins

    auto straightRod = [](const Vec3& a, const Vec3& b, int n) {
        std::vector<Vec3> nodes;
        for (int i = 0; i < n; ++i)
            nodes.push_back(a + (b - a) * (static_cast<double>(i) / (n - 1)));
        return RodState::fromRestShape(nodes);
    };

    SECTION("far apart rods yield an empty set")
    {
        std::vector<RodState> rods;
        rods.push_back(straightRod(Vec3(0, 0, 0), Vec3(1, 0, 0), 11));
        rods.push_back(straightRod(Vec3(0, 5, 0), Vec3(1, 5, 0), 11));
        REQUIRE(build_candidate_set(rods, h, 0.2 * h).pairs.empty());
    }
    SECTION("touching crossed rods contain the crossing pair")
    {
        std::vector<RodState> rods;
        rods.push_back(straightRod(Vec3(-0.5, 0, 0), Vec3(0.5, 0, 0), 11));
        rods.push_back(straightRod(Vec3(0, -0.5, 2 * h), Vec3(0, 0.5, 2 * h), 11));
        const CandidateSet cs = build_candidate_set(rods, h, 0.2 * h);
        REQUIRE_FALSE(cs.pairs.empty());
        // the crossing happens mid-rod at the shared node of edges 4 and 5
        bool foundCrossing = false;
        for (const auto& k : cs.pairs)
            if (k.rodA == 0 && k.rodB == 1 && k.edgeI >= 4 && k.edgeI <= 5 && k.edgeJ >= 4
                && k.edgeJ <= 5)
                foundCrossing = true;
        REQUIRE(foundCrossing);
        // the straight rods themselves contribute nothing
        for (const auto& k : cs.pairs)
            REQUIRE(k.rodA != k.rodB);
    }
    SECTION("random scene equals the brute-force all-pairs filter")
    {
        std::mt19937 rng(31);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<RodState> rods;
            rods.push_back(oracles::randomRod(rng, 9));
            rods.push_back(oracles::randomRod(rng, 7));
            const double dhat = 0.4;
            const CandidateSet cs = build_candidate_set(rods, h, dhat);
            // brute force without box rejection
            std::vector<EdgePairKey> expected;
            for (int ra = 0; ra < 2; ++ra)
                for (int rb = ra; rb < 2; ++rb)
                    for (int i = 0; i < rods[ra].numEdges(); ++i)
                        for (int j = (ra == rb ? i + 2 : 0); j < rods[rb].numEdges(); ++j) {
                            const DistanceResult d = classify_and_beta(
                                rods[ra].node(i), rods[ra].node(i + 1), rods[rb].node(j),
                                rods[rb].node(j + 1));
                            if (d.distance < 2 * h + dhat)
                                expected.push_back({ra, i, rb, j});
                        }
            REQUIRE(cs.pairs == expected);
        }
    }
    SECTION("monotone filter: active set is contained in the candidate set")
    {
        std::mt19937 rng(37);
        std::vector<RodState> rods;
        rods.push_back(oracles::randomRod(rng, 9));
        rods.push_back(oracles::randomRod(rng, 9));
        const double delta = 0.02, dhat = 0.3;
        const CandidateSet cs = build_candidate_set(rods, h, dhat);
        const auto active = refresh_contact_set(rods, cs, h, delta);
        for (const auto& a : active) {
            REQUIRE(std::binary_search(cs.pairs.begin(), cs.pairs.end(), a.key));
            REQUIRE(a.geom.distance < 2 * h + delta);
        }
        // every brute-force active pair is found
        std::vector<EdgePairKey> expected;
        for (int ra = 0; ra < 2; ++ra)
            for (int rb = ra; rb < 2; ++rb)
                for (int i = 0; i < rods[ra].numEdges(); ++i)
                    for (int j = (ra == rb ? i + 2 : 0); j < rods[rb].numEdges(); ++j) {
                        const DistanceResult d = classify_and_beta(rods[ra].node(i),
                                                                   rods[ra].node(i + 1),
                                                                   rods[rb].node(j),
                                                                   rods[rb].node(j + 1));
                        if (d.distance < 2 * h + delta)
                            expected.push_back({ra, i, rb, j});
                    }
        REQUIRE(active.size() == expected.size());
    }
}
