#include "rodsim/rod_state.hpp"

#include <cmath>

namespace rodsim {

namespace {
constexpr double kMinEdgeLength = 1e-12; // [m]

Vec3 anyPerpendicular(const Vec3& t)
{
    // pick the coordinate axis least aligned with t
    Vec3 a = Vec3::UnitX();
    if (std::abs(t.x()) > std::abs(t.y()))
        a = std::abs(t.y()) > std::abs(t.z()) ? Vec3::UnitZ() : Vec3::UnitY();
    Vec3 d = a - a.dot(t) * t;
    return d.normalized();
}
} // namespace

MaterialParams MaterialParams::circular(double youngs, double shear, double density, double h)
{
    MaterialParams p;
    p.youngs = youngs;
    p.shear = shear;
    p.density = density;
    p.radius = h;
    p.area = M_PI * h * h;
    p.I1 = M_PI * std::pow(h, 4) / 4.0;
    p.I2 = p.I1;
    p.polarJ = M_PI * std::pow(h, 4) / 2.0;
    return p;
}

RodState RodState::fromRestShape(std::vector<Vec3> nodes)
{
    RodState s;
    s.nodes_ = std::move(nodes);
    const int nv = s.numNodes();
    const int ne = nv - 1;
    s.thetas_ = VecX::Zero(ne);
    s.velocities_ = VecX::Zero(4 * nv - 1);

    s.restEdgeLen_.resize(ne);
    for (int e = 0; e < ne; ++e) {
        const double len = (s.nodes_[e + 1] - s.nodes_[e]).norm();
        if (len < kMinEdgeLength)
            throw DegenerateEdge("rest edge " + std::to_string(e) + " has near-zero length");
        s.restEdgeLen_[e] = len;
    }
    s.restTotalLen_ = s.restEdgeLen_.sum();

    s.voronoiLen_.resize(nv);
    s.voronoiLen_[0] = 0.5 * s.restEdgeLen_[0];
    s.voronoiLen_[nv - 1] = 0.5 * s.restEdgeLen_[ne - 1];
    for (int i = 1; i < nv - 1; ++i)
        s.voronoiLen_[i] = 0.5 * (s.restEdgeLen_[i - 1] + s.restEdgeLen_[i]);

    s.recomputeFromNodes(nullptr);

    s.restKappa_ = MatX::Zero(nv, 2);
    for (int i = 1; i < nv - 1; ++i)
        s.restKappa_.row(i) = s.materialCurvatures(i).transpose();
    return s;
}

void RodState::setVelocities(const VecX& v)
{
    if (v.size() != numDofs())
        throw SimError("velocity vector size mismatch");
    velocities_ = v;
}

void RodState::recomputeFromNodes(const RodState* transportFrom)
{
    const int nv = numNodes();
    const int ne = nv - 1;
    edgeLen_.resize(ne);
    tangent_.resize(ne);
    d1_.resize(ne);
    d2_.resize(ne);
    m1_.resize(ne);
    m2_.resize(ne);
    refTwist_ = VecX::Zero(nv);

    for (int e = 0; e < ne; ++e) {
        const Vec3 ev = nodes_[e + 1] - nodes_[e];
        edgeLen_[e] = ev.norm();
        if (edgeLen_[e] < kMinEdgeLength)
            throw DegenerateEdge("edge " + std::to_string(e) + " collapsed below 1e-12 m");
        tangent_[e] = ev / edgeLen_[e];
    }

    if (transportFrom == nullptr) {
        // initial frames: space-parallel transport along the rod so the
        // built state has zero reference twist
        d1_[0] = anyPerpendicular(tangent_[0]);
        d2_[0] = tangent_[0].cross(d1_[0]);
        for (int e = 1; e < ne; ++e) {
            Vec3 d = parallelTransport(d1_[e - 1], tangent_[e - 1], tangent_[e]);
            d -= d.dot(tangent_[e]) * tangent_[e];
            d1_[e] = d.normalized();
            d2_[e] = tangent_[e].cross(d1_[e]);
        }
    } else {
        // time-parallel transport from the previous frames to the new tangents
        for (int e = 0; e < ne; ++e) {
            Vec3 d = parallelTransport(transportFrom->d1_[e], transportFrom->tangent_[e], tangent_[e]);
            d -= d.dot(tangent_[e]) * tangent_[e];
            d1_[e] = d.normalized();
            d2_[e] = tangent_[e].cross(d1_[e]);
        }
    }

    // reference twist: angle between consecutive space-parallel-transported
    // reference frames, unwrapped around the previous value
    for (int i = 1; i < nv - 1; ++i) {
        const int ep = i - 1;
        const int ec = i;
        const Vec3 u = parallelTransport(d1_[ep], tangent_[ep], tangent_[ec]);
        const double guess = transportFrom ? transportFrom->refTwist_[i] : 0.0;
        const Vec3 uRot = rotateAboutAxis(u, tangent_[ec], guess);
        refTwist_[i] = guess + signedAngle(uRot, d1_[ec], tangent_[ec]);
    }

    for (int e = 0; e < ne; ++e) {
        const double c = std::cos(thetas_[e]);
        const double s = std::sin(thetas_[e]);
        m1_[e] = c * d1_[e] + s * d2_[e];
        m2_[e] = -s * d1_[e] + c * d2_[e];
    }
}

double RodState::stretchStrain(int e) const
{
    return edgeLen_[e] / restEdgeLen_[e] - 1.0;
}

Vec3 RodState::curvatureBinormal(int i) const
{
    const Vec3 ep = nodes_[i] - nodes_[i - 1];
    const Vec3 ec = nodes_[i + 1] - nodes_[i];
    const double denom = ep.norm() * ec.norm() + ep.dot(ec);
    if (denom <= 1e-12 * ep.norm() * ec.norm())
        throw AntiparallelEdges("turning angle ~pi at node " + std::to_string(i));
    return 2.0 * ep.cross(ec) / denom;
}

Vec2 RodState::materialCurvatures(int i) const
{
    const Vec3 kb = curvatureBinormal(i);
    const int ep = i - 1;
    const int ec = i;
    Vec2 k;
    k[0] = 0.5 * (m2_[ep] + m2_[ec]).dot(kb);
    k[1] = 0.5 * (m1_[ep] + m1_[ec]).dot(kb);
    return k;
}

double RodState::twistStrain(int i) const
{
    return thetas_[i] - thetas_[i - 1] + refTwist_[i];
}

RodState RodState::withUpdatedFrames(std::vector<Vec3> newNodes) const
{
    return withUpdatedFrames(std::move(newNodes), thetas_);
}

RodState RodState::withUpdatedFrames(std::vector<Vec3> newNodes, VecX newThetas) const
{
    if (static_cast<int>(newNodes.size()) != numNodes() || newThetas.size() != numEdges())
        throw SimError("withUpdatedFrames: node/theta count mismatch");
    RodState s = *this;
    s.nodes_ = std::move(newNodes);
    s.thetas_ = std::move(newThetas);
    s.recomputeFromNodes(this);
    return s;
}

VecX RodState::packDofs() const
{
    VecX q(numDofs());
    const int nv = numNodes();
    for (int i = 0; i < nv; ++i) {
        q.segment<3>(4 * i) = nodes_[i];
        if (i < nv - 1)
            q[4 * i + 3] = thetas_[i];
    }
    return q;
}

void RodState::unpackDofs(const VecX& q, std::vector<Vec3>& nodes, VecX& thetas)
{
    const int nv = static_cast<int>((q.size() + 1) / 4);
    nodes.resize(nv);
    thetas.resize(nv - 1);
    for (int i = 0; i < nv; ++i) {
        nodes[i] = q.segment<3>(4 * i);
        if (i < nv - 1)
            thetas[i] = q[4 * i + 3];
    }
}

} // namespace rodsim
