#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "rodsim/rod_state.hpp"

namespace rodsim {

struct ElasticEnergy {
    double stretch = 0.0;
    double bend = 0.0;
    double twist = 0.0;
    double total() const { return stretch + bend + twist; }
};

/// Curvature/twist values and their analytic derivatives on the two-edge
/// stencil around an interior node. Local DOF order:
/// [x_{i-1}, theta^{i-1}, x_i, theta^i, x_{i+1}] (11 scalars).
struct BendTwistStencil {
    Vec2 kappa;
    double tau = 0.0;
    Vec11 gradKappa1, gradKappa2, gradTau;
    Mat11 hessKappa1, hessKappa2, hessTau;
};

BendTwistStencil bend_twist_stencil(const RodState& rod, int node);

ElasticEnergy elastic_energy(const RodState& rod, const MaterialParams& mat);

/// F^int = -d(E_s + E_b + E_t)/dq, size 4N-1, closed-form per stencil.
VecX internal_forces(const RodState& rod, const MaterialParams& mat);

/// Hessian of the total elastic energy, size (4N-1)^2, symmetric and banded
/// with the two-edge stencil width of 11 DOFs.
MatX internal_jacobian(const RodState& rod, const MaterialParams& mat);

/// Scatter forms used by the solver: accumulate F^int into `force` and the
/// energy Hessian into `triplets`, both at the given global DOF offset.
void accumulate_internal_forces(const RodState& rod, const MaterialParams& mat, int offset,
                                VecX& force);
void accumulate_internal_jacobian(const RodState& rod, const MaterialParams& mat, int offset,
                                  std::vector<Eigen::Triplet<double>>& triplets);

} // namespace rodsim
