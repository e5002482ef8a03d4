#pragma once

#include <vector>

#include "rodsim/errors.hpp"
#include "rodsim/types.hpp"

namespace rodsim {

/// Material and cross-section constants of one rod.
struct MaterialParams {
    double youngs = 0.0;   // E [Pa]
    double shear = 0.0;    // G [Pa]
    double area = 0.0;     // A [m^2]
    double I1 = 0.0;       // second moment about m1 [m^4]
    double I2 = 0.0;       // second moment about m2 [m^4]
    double polarJ = 0.0;   // polar second moment [m^4]
    double density = 0.0;  // rho [kg/m^3]
    double radius = 0.0;   // h, cross-section radius [m]

    /// Circular cross-section of radius h: A = pi h^2, I1 = I2 = pi h^4 / 4, J = pi h^4 / 2.
    static MaterialParams circular(double youngs, double shear, double density, double h);
};

/// Discrete elastic rod: N nodes, N-1 edges, centerline positions plus
/// per-edge twist angles. Reference frames evolve by time-parallel transport;
/// material frames are the reference frames rotated by theta about the tangent.
///
/// DOF layout for one rod: [x_0, theta^0, x_1, theta^1, ..., theta^{N-2}, x_{N-1}],
/// 4N-1 scalars.
class RodState {
public:
    RodState() = default;

    /// Build a rod from node positions, taking the given shape as the
    /// stress-free rest configuration. Initial reference frames are
    /// space-parallel transported from an arbitrary first director, so the
    /// built state carries zero reference twist.
    static RodState fromRestShape(std::vector<Vec3> nodes);

    int numNodes() const { return static_cast<int>(nodes_.size()); }
    int numEdges() const { return numNodes() - 1; }
    int numDofs() const { return 4 * numNodes() - 1; }

    const std::vector<Vec3>& nodes() const { return nodes_; }
    const VecX& thetas() const { return thetas_; }
    const VecX& velocities() const { return velocities_; }
    void setVelocities(const VecX& v);

    const Vec3& node(int i) const { return nodes_[i]; }
    double theta(int e) const { return thetas_[e]; }

    double edgeLength(int e) const { return edgeLen_[e]; }
    Vec3 edge(int e) const { return nodes_[e + 1] - nodes_[e]; }
    const Vec3& tangent(int e) const { return tangent_[e]; }
    const Vec3& refDirector1(int e) const { return d1_[e]; }
    const Vec3& refDirector2(int e) const { return d2_[e]; }
    const Vec3& matDirector1(int e) const { return m1_[e]; }
    const Vec3& matDirector2(int e) const { return m2_[e]; }
    /// Reference twist at interior node i (angle between consecutive
    /// space-parallel-transported reference frames).
    double refTwist(int i) const { return refTwist_[i]; }

    double restEdgeLength(int e) const { return restEdgeLen_[e]; }
    double restTotalLength() const { return restTotalLen_; }
    /// Rest Voronoi length of node i: half-edge lengths at the ends,
    /// average of the adjacent rest edge lengths inside.
    double voronoiLength(int i) const { return voronoiLen_[i]; }
    Vec2 restCurvature(int i) const { return restKappa_.row(i); }

    /// Strains (current configuration).
    double stretchStrain(int e) const;
    Vec3 curvatureBinormal(int i) const;
    Vec2 materialCurvatures(int i) const;
    double twistStrain(int i) const;

    /// New state with the given node positions (and optionally new twist
    /// angles): reference frames are time-parallel transported from this
    /// state's frames, reference twists recomputed, material frames rebuilt.
    /// Rest quantities and velocities carry over.
    RodState withUpdatedFrames(std::vector<Vec3> newNodes) const;
    RodState withUpdatedFrames(std::vector<Vec3> newNodes, VecX newThetas) const;

    /// Pack positions and twists into a 4N-1 DOF vector (and back).
    VecX packDofs() const;
    static void unpackDofs(const VecX& q, std::vector<Vec3>& nodes, VecX& thetas);

private:
    void recomputeFromNodes(const RodState* transportFrom);

    std::vector<Vec3> nodes_;
    VecX thetas_;
    VecX velocities_;

    VecX edgeLen_;
    std::vector<Vec3> tangent_, d1_, d2_, m1_, m2_;
    VecX refTwist_;

    VecX restEdgeLen_;
    VecX voronoiLen_;
    MatX restKappa_;
    double restTotalLen_ = 0.0;
};

/// Spec-level free functions mirroring the per-operation contracts.
inline double stretch_strain(const RodState& s, int edge) { return s.stretchStrain(edge); }
inline Vec3 curvature_binormal(const RodState& s, int node) { return s.curvatureBinormal(node); }
inline Vec2 material_curvatures(const RodState& s, int node) { return s.materialCurvatures(node); }
inline double twist_strain(const RodState& s, int node) { return s.twistStrain(node); }
inline RodState update_frames(const RodState& s, std::vector<Vec3> newNodes)
{
    return s.withUpdatedFrames(std::move(newNodes));
}

} // namespace rodsim
