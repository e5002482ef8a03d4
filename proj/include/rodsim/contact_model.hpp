#pragma once

#include <span>

#include "rodsim/contact_geometry.hpp"
#include "rodsim/types.hpp"

namespace rodsim {

/// Penalty contact parameters. Distances are scaled by 1/h inside the energy,
/// so the contact threshold sits at 2 and the tolerance enters as
/// deltaBar = delta / h with energy stiffness K1 = 15 / deltaBar = 15 h / delta.
struct ContactParams {
    double h = 1e-3;              // rod radius [m]
    double deltaBar = 1e-2;       // scaled distance tolerance
    double stiffness = 0.0;       // k, adaptive (set by update_contact_stiffness)
    double stiffnessScale = 1e5;  // s
    double deltaHat = 1.0e-3;     // candidate margin [m], default 1.0 h

    double delta() const { return deltaBar * h; }
    double K1() const { return 15.0 / deltaBar; }
};

/// Scaled contact energy: quadratic inside 2 - deltaBar, squared softplus
/// across the tolerance band, zero beyond 2 + deltaBar.
/// Throws NonPositiveDistance for dBar <= 0.
double contact_energy(double dBar, double deltaBar);

/// Energy value with first and second derivatives in the scaled distance.
void contact_energy_derivs(double dBar, double deltaBar, double& e, double& de, double& d2e);

/// Per-pair contact response in physical coordinates, blocks ordered
/// (x_i, x_{i+1}, x_j, x_{j+1}).
struct ContactResponse {
    double energy = 0.0;  // k-scaled energy of the pair (scaled coordinates)
    Vec12 force = Vec12::Zero();     // repulsive force blocks, -k grad E
    Mat12 jacobian = Mat12::Zero();  // d(force)/dx, symmetric
};

/// Gradient of the minimum distance (and its Hessian) through the classified
/// branch, including the sensitivity of the interior contact ratios.
struct DistanceDerivs {
    DistanceResult geom;
    Vec12 grad = Vec12::Zero();
    Mat12 hess = Mat12::Zero();
};

DistanceDerivs distance_derivs(const Vec12& x);

/// Contact energy gradient/Hessian composed through the classified distance,
/// evaluated in 1/h-scaled coordinates and restored to physical units.
ContactResponse contact_force_jacobian(const Vec12& x, const ContactParams& params);

/// Adaptive contact stiffness: k = s * max(force norms over candidate nodes);
/// an empty candidate set keeps the previous value.
double update_contact_stiffness(std::span<const double> candidateNodeForceNorms, double scale,
                                double previous);

} // namespace rodsim
