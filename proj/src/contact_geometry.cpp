#include "rodsim/contact_geometry.hpp"

#include <algorithm>
#include <cmath>

namespace rodsim {

namespace {
constexpr double kParallelTol = 1e-10; // on |ei x ej| / (|ei| |ej|)

bool clamped01(double b)
{
    return b == 0.0 || b == 1.0;
}

double clamp01(double v)
{
    return std::clamp(v, 0.0, 1.0);
}
} // namespace

double distance_pp(const Vec3& xa, const Vec3& xb)
{
    return (xa - xb).norm();
}

double distance_pe(const Vec3& xa, const Vec3& xb, const Vec3& xc)
{
    const double edgeLen = (xa - xb).norm();
    if (edgeLen < 1e-12)
        throw DegenerateEdge("point-edge distance on zero-length edge");
    return (xa - xb).cross(xb - xc).norm() / edgeLen;
}

double distance_ee(const Vec3& xi, const Vec3& xi1, const Vec3& xj, const Vec3& xj1)
{
    const Vec3 ei = xi1 - xi;
    const Vec3 ej = xj1 - xj;
    const Vec3 u = ei.cross(ej);
    if (u.norm() <= kParallelTol * ei.norm() * ej.norm())
        throw ParallelEdges("edge-to-edge distance undefined for parallel edges");
    return std::abs((xi - xj).dot(u.normalized()));
}

DistanceResult classify_and_beta(const Vec12& x)
{
    return classify_and_beta(x.segment<3>(0), x.segment<3>(3), x.segment<3>(6), x.segment<3>(9));
}

DistanceResult classify_and_beta(const Vec3& xi, const Vec3& xi1, const Vec3& xj, const Vec3& xj1)
{
    const Vec3 d1 = xi1 - xi;
    const Vec3 d2 = xj1 - xj;
    const Vec3 r = xi - xj;
    const double a = d1.squaredNorm();
    const double e = d2.squaredNorm();
    const double b = d1.dot(d2);
    const double c = d1.dot(r);
    const double f = d2.dot(r);

    const double denom = a * e - b * b; // = |d1 x d2|^2
    double s, t;
    if (denom > kParallelTol * kParallelTol * a * e) {
        s = clamp01((b * f - c * e) / denom);
        t = (b * s + f) / e;
        if (t < 0.0) {
            t = 0.0;
            s = clamp01(-c / a);
        } else if (t > 1.0) {
            t = 1.0;
            s = clamp01((b - c) / a);
        }
    } else {
        // near-parallel: every s with an in-range projection minimizes the
        // distance; take the minimizing interval and the point of it closest
        // to (1/2, 1/2)
        double sLo = 0.0, sHi = 1.0;
        const double t0 = f / e;            // projection of s = 0
        const double dt = b / e;            // d(t)/d(s), |dt| ~ |d1|/|d2|
        if (std::abs(dt) > 1e-30) {
            const double sAt0 = -t0 / dt;        // s where t = 0
            const double sAt1 = (1.0 - t0) / dt; // s where t = 1
            sLo = clamp01(std::min(sAt0, sAt1));
            sHi = clamp01(std::max(sAt0, sAt1));
        }
        if (sHi > sLo) {
            // minimize (s-1/2)^2 + (t(s)-1/2)^2 over [sLo, sHi]
            const double num = 0.5 + 0.5 * dt - t0 * dt;
            const double sStar = num / (1.0 + dt * dt);
            s = std::clamp(sStar, sLo, sHi);
            t = clamp01(t0 + dt * s);
        } else {
            // disjoint projections: the minimum sits on endpoint(s)
            t = clamp01(t0);
            s = clamp01((t * b - c) / a);
            t = clamp01((b * s + f) / e);
        }
    }

    DistanceResult res;
    res.betaI = s;
    res.betaJ = t;
    res.closestI = xi + s * d1;
    res.closestJ = xj + t * d2;
    res.distance = (res.closestI - res.closestJ).norm();
    const int nClamped = (clamped01(s) ? 1 : 0) + (clamped01(t) ? 1 : 0);
    res.kind = nClamped == 2 ? DistanceKind::PointPoint
                             : (nClamped == 1 ? DistanceKind::PointEdge : DistanceKind::EdgeEdge);
    return res;
}

namespace {

struct EdgeBox {
    Vec3 lo, hi;
};

std::vector<std::vector<EdgeBox>> edgeBoxes(const std::vector<RodState>& rods)
{
    std::vector<std::vector<EdgeBox>> boxes(rods.size());
    for (size_t r = 0; r < rods.size(); ++r) {
        boxes[r].resize(rods[r].numEdges());
        for (int e = 0; e < rods[r].numEdges(); ++e) {
            const Vec3& p = rods[r].node(e);
            const Vec3& q = rods[r].node(e + 1);
            boxes[r][e].lo = p.cwiseMin(q);
            boxes[r][e].hi = p.cwiseMax(q);
        }
    }
    return boxes;
}

bool boxesFartherThan(const EdgeBox& a, const EdgeBox& b, double threshold)
{
    for (int k = 0; k < 3; ++k) {
        const double gap = std::max(a.lo[k] - b.hi[k], b.lo[k] - a.hi[k]);
        if (gap > threshold)
            return true;
    }
    return false;
}

} // namespace

CandidateSet build_candidate_set(const std::vector<RodState>& rods, double h, double deltaHat)
{
    const double threshold = 2.0 * h + deltaHat;
    const auto boxes = edgeBoxes(rods);
    CandidateSet set;
    const int numRods = static_cast<int>(rods.size());
    for (int ra = 0; ra < numRods; ++ra) {
        for (int rb = ra; rb < numRods; ++rb) {
            for (int i = 0; i < rods[ra].numEdges(); ++i) {
                const int jStart = (ra == rb) ? i + 2 : 0;
                for (int j = jStart; j < rods[rb].numEdges(); ++j) {
                    if (boxesFartherThan(boxes[ra][i], boxes[rb][j], threshold))
                        continue;
                    const DistanceResult d = classify_and_beta(
                        rods[ra].node(i), rods[ra].node(i + 1), rods[rb].node(j), rods[rb].node(j + 1));
                    if (d.distance < threshold)
                        set.pairs.push_back({ra, i, rb, j});
                }
            }
        }
    }
    std::sort(set.pairs.begin(), set.pairs.end());
    return set;
}

std::vector<ActiveContact> refresh_contact_set(const std::vector<RodState>& rods,
                                               const CandidateSet& candidates, double h,
                                               double delta)
{
    const double threshold = 2.0 * h + delta;
    std::vector<ActiveContact> active;
    for (const EdgePairKey& k : candidates.pairs) {
        const DistanceResult d = classify_and_beta(rods[k.rodA].node(k.edgeI),
                                                   rods[k.rodA].node(k.edgeI + 1),
                                                   rods[k.rodB].node(k.edgeJ),
                                                   rods[k.rodB].node(k.edgeJ + 1));
        if (d.distance < threshold)
            active.push_back({k, d});
    }
    return active;
}

} // namespace rodsim
