#pragma once

#include <compare>
#include <vector>

#include "rodsim/errors.hpp"
#include "rodsim/rod_state.hpp"
#include "rodsim/types.hpp"

namespace rodsim {

/// Edge-to-edge distance is undefined for (near-)parallel edges; callers fall
/// back to the point-edge / point-point formulas.
struct ParallelEdges : SimError {
    using SimError::SimError;
};

enum class DistanceKind { PointPoint, PointEdge, EdgeEdge };

/// Minimum-distance solution between two edges: active-constraint
/// classification, contact ratios, and the closest point pair.
struct DistanceResult {
    DistanceKind kind = DistanceKind::EdgeEdge;
    double distance = 0.0;
    double betaI = 0.0;
    double betaJ = 0.0;
    Vec3 closestI = Vec3::Zero();
    Vec3 closestJ = Vec3::Zero();
};

/// Solve min ||xi + bi*(xi1-xi) - xj - bj*(xj1-xj)|| over bi, bj in [0,1]
/// (Lumelsky's clamping scheme) and classify by the active-constraint
/// pattern: both ratios clamped -> PointPoint, one clamped -> PointEdge,
/// none -> EdgeEdge. Near-parallel pairs are resolved by picking, among the
/// minimizing segment, the ratio pair closest to (1/2, 1/2); such pairs keep
/// their post-hoc classification but are never routed through the
/// edge-to-edge distance formula.
DistanceResult classify_and_beta(const Vec3& xi, const Vec3& xi1, const Vec3& xj, const Vec3& xj1);
DistanceResult classify_and_beta(const Vec12& x);

double distance_pp(const Vec3& xa, const Vec3& xb);
/// Distance from point xc to the line through the edge (xa, xb); the
/// classification guarantees the foot lies within the segment.
double distance_pe(const Vec3& xa, const Vec3& xb, const Vec3& xc);
/// Distance between the infinite lines through two skew edges.
double distance_ee(const Vec3& xi, const Vec3& xi1, const Vec3& xj, const Vec3& xj1);

/// Canonically ordered edge pair; within one rod, |edgeI - edgeJ| > 1 so
/// consecutive edges are excluded.
struct EdgePairKey {
    int rodA = 0;
    int edgeI = 0;
    int rodB = 0;
    int edgeJ = 0;
    auto operator<=>(const EdgePairKey&) const = default;
};

struct CandidateSet {
    std::vector<EdgePairKey> pairs;
};

struct ActiveContact {
    EdgePairKey key;
    DistanceResult geom;
};

/// All valid edge pairs with distance < 2h + deltaHat at the current
/// positions; brute-force sweep with axis-aligned box early rejection.
CandidateSet build_candidate_set(const std::vector<RodState>& rods, double h, double deltaHat);

/// Filter the candidates down to pairs with distance < 2h + delta at the
/// current positions.
std::vector<ActiveContact> refresh_contact_set(const std::vector<RodState>& rods,
                                               const CandidateSet& candidates, double h,
                                               double delta);

} // namespace rodsim
