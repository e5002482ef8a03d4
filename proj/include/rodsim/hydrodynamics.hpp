#pragma once

#include <vector>

#include "rodsim/rod_state.hpp"
#include "rodsim/types.hpp"

namespace rodsim {

struct RssParams {
    double viscosity = 0.1;   // eta [Pa s]
    double epsilon = 1.02e-3; // regularization length [m], 1.02 h by default
};

/// Closed-form values of T_{k,l} = integral_0^1 alpha^k R_alpha^l d(alpha)
/// with r_alpha = r0 + alpha e and R_alpha^2 = |r_alpha|^2 + eps^2.
struct TIntegrals {
    double t0m1 = 0.0;
    double t0m3 = 0.0;
    double t1m1 = 0.0;
    double t1m3 = 0.0;
    double t2m3 = 0.0;
    double t3m3 = 0.0;
};

/// r0 points from the evaluation point to the edge's first node; the
/// Stokeslet dyad is even in r so this orientation matches the closed forms.
TIntegrals t_integrals(const Vec3& r0, const Vec3& e, double eps);

/// Velocity coefficient blocks of one edge at one evaluation point:
/// 8 pi eta u(эval) = A1 f_start + A2 f_end, f being force densities at the
/// edge endpoints.
void rss_edge_blocks(const Vec3& evalPoint, const Vec3& edgeStart, const Vec3& edgeEnd, double eps,
                     Mat3& blockStart, Mat3& blockEnd);

/// 8 pi eta u at evalPoint induced by one edge with linearly varying force
/// density (f0 at edgeStart, f1 at edgeEnd).
Vec3 edge_velocity_contribution(const Vec3& evalPoint, const Vec3& edgeStart, const Vec3& edgeEnd,
                                const Vec3& f0, const Vec3& f1, const RssParams& params);

/// Dense map over all nodes of all rods with 8 pi eta U = A f; every edge of
/// every rod contributes to every node, so cross-rod coupling is included.
MatX assemble_mobility(const std::vector<RodState>& rods, const RssParams& params);

/// Viscous nodal forces from the rods' current velocities: solve
/// A f = 8 pi eta U for the force densities and return the force the fluid
/// exerts on the rods, -f_node * voronoi_length, in global DOF layout
/// (twist entries zero). Velocities are taken from the rod states.
VecX hydrodynamic_forces(const std::vector<RodState>& rods, const RssParams& params);

} // namespace rodsim
