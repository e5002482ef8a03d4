#include "rodsim/hydrodynamics.hpp"

#include <Eigen/LU>

#include <cassert>
#include <cmath>

namespace rodsim {

namespace {

// |e| R + r.e, rewritten to stay positive when r.e < 0
double stableLogArg(const Vec3& r, const Vec3& e, double R, double eps)
{
    const double eLen = e.norm();
    const double re = r.dot(e);
    if (re >= 0.0)
        return eLen * R + re;
    const double num = eLen * eLen * eps * eps + r.cross(e).squaredNorm();
    return num / (eLen * R - re);
}

} // namespace

TIntegrals t_integrals(const Vec3& r0, const Vec3& e, double eps)
{
    const double eLen2 = e.squaredNorm();
    const double eLen = std::sqrt(eLen2);
    assert(eLen > 0.0 && eps > 0.0);

    const Vec3 r1 = r0 + e;
    const double R0 = std::sqrt(r0.squaredNorm() + eps * eps);
    const double R1 = std::sqrt(r1.squaredNorm() + eps * eps);
    const double g0 = stableLogArg(r0, e, R0, eps);
    const double g1 = stableLogArg(r1, e, R1, eps);
    assert(g0 > 0.0 && g1 > 0.0);
    const double r0e = r0.dot(e);

    TIntegrals t;
    t.t0m1 = (std::log(g1) - std::log(g0)) / eLen;
    t.t0m3 = -1.0 / (R1 * g1) + 1.0 / (R0 * g0);
    t.t1m1 = (R1 - R0) / eLen2 - r0e / eLen2 * t.t0m1;
    t.t1m3 = (-1.0 / R1 + 1.0 / R0) / eLen2 - r0e / eLen2 * t.t0m3;
    t.t2m3 = -1.0 / (R1 * eLen2) + t.t0m1 / eLen2 - r0e / eLen2 * t.t1m3;
    t.t3m3 = -1.0 / (R1 * eLen2) + 2.0 * t.t1m1 / eLen2 - r0e / eLen2 * t.t2m3;
    return t;
}

void rss_edge_blocks(const Vec3& evalPoint, const Vec3& edgeStart, const Vec3& edgeEnd, double eps,
                     Mat3& blockStart, Mat3& blockEnd)
{
    const Vec3 e = edgeEnd - edgeStart;
    const Vec3 r0 = edgeStart - evalPoint;
    const double eLen = e.norm();
    const TIntegrals t = t_integrals(r0, e, eps);

    const Mat3 rr = r0 * r0.transpose();
    const Mat3 re = r0 * e.transpose() + e * r0.transpose();
    const Mat3 ee = e * e.transpose();
    const double eps2 = eps * eps;

    // coefficient blocks of the constant / linear force-density terms
    const Mat3 b0 = (t.t0m1 + eps2 * t.t0m3) * Mat3::Identity() + t.t0m3 * rr + t.t1m3 * re
        + t.t2m3 * ee;
    const Mat3 b1 = (t.t1m1 + eps2 * t.t1m3) * Mat3::Identity() + t.t1m3 * rr + t.t2m3 * re
        + t.t3m3 * ee;

    blockEnd = eLen * b1;
    blockStart = eLen * b0 - blockEnd;
}

Vec3 edge_velocity_contribution(const Vec3& evalPoint, const Vec3& edgeStart, const Vec3& edgeEnd,
                                const Vec3& f0, const Vec3& f1, const RssParams& params)
{
    Mat3 a1, a2;
    rss_edge_blocks(evalPoint, edgeStart, edgeEnd, params.epsilon, a1, a2);
    return a1 * f0 + a2 * f1;
}

namespace {

std::vector<int> nodeOffsets(const std::vector<RodState>& rods)
{
    std::vector<int> off(rods.size() + 1, 0);
    for (size_t r = 0; r < rods.size(); ++r)
        off[r + 1] = off[r] + rods[r].numNodes();
    return off;
}

} // namespace

MatX assemble_mobility(const std::vector<RodState>& rods, const RssParams& params)
{
    const auto off = nodeOffsets(rods);
    const int nTotal = off.back();
    MatX A = MatX::Zero(3 * nTotal, 3 * nTotal);

    for (size_t re = 0; re < rods.size(); ++re) {
        for (size_t rv = 0; rv < rods.size(); ++rv) {
            for (int i = 0; i < rods[rv].numNodes(); ++i) {
                const Vec3& eval = rods[rv].node(i);
                const int row = 3 * (off[rv] + i);
                for (int k = 0; k < rods[re].numEdges(); ++k) {
                    Mat3 a1, a2;
                    rss_edge_blocks(eval, rods[re].node(k), rods[re].node(k + 1), params.epsilon,
                                    a1, a2);
                    A.block<3, 3>(row, 3 * (off[re] + k)) += a1;
                    A.block<3, 3>(row, 3 * (off[re] + k + 1)) += a2;
                }
            }
        }
    }
    return A;
}

VecX hydrodynamic_forces(const std::vector<RodState>& rods, const RssParams& params)
{
    const auto off = nodeOffsets(rods);
    const int nTotal = off.back();

    VecX U(3 * nTotal);
    bool anyMotion = false;
    for (size_t r = 0; r < rods.size(); ++r) {
        const VecX& v = rods[r].velocities();
        for (int i = 0; i < rods[r].numNodes(); ++i) {
            U.segment<3>(3 * (off[r] + i)) = v.segment<3>(4 * i);
            anyMotion = anyMotion || U.segment<3>(3 * (off[r] + i)).norm() > 0.0;
        }
    }

    int dofTotal = 0;
    for (const RodState& rod : rods)
        dofTotal += rod.numDofs();
    VecX F = VecX::Zero(dofTotal);
    if (!anyMotion)
        return F;

    const MatX A = assemble_mobility(rods, params);
    const VecX rhs = 8.0 * M_PI * params.viscosity * U;
    Eigen::PartialPivLU<MatX> lu(A);
    const VecX f = lu.solve(rhs);
    if (!f.allFinite() || (A * f - rhs).norm() > 1e-8 * std::max(rhs.norm(), 1e-300))
        throw SingularMobility("mobility solve failed (coincident nodes?)");

    int dofOff = 0;
    for (size_t r = 0; r < rods.size(); ++r) {
        const RodState& rod = rods[r];
        for (int i = 0; i < rod.numNodes(); ++i) {
            // current-configuration Voronoi length
            double dl = 0.0;
            if (i > 0)
                dl += 0.5 * rod.edgeLength(i - 1);
            if (i < rod.numNodes() - 1)
                dl += 0.5 * rod.edgeLength(i);
            // drag on the rod is minus the force density exerted on the fluid
            F.segment<3>(dofOff + 4 * i) = -dl * f.segment<3>(3 * (off[r] + i));
        }
        dofOff += rod.numDofs();
    }
    return F;
}

} // namespace rodsim
