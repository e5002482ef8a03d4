#pragma once

#include "rodsim/contact_model.hpp"
#include "rodsim/types.hpp"

namespace rodsim {

/// Normal force vanished for a pair; friction is skipped.
struct ZeroNormalForce : SimError {
    using SimError::SimError;
};

struct FrictionParams {
    double mu = 0.0;   // Coulomb friction coefficient
    double nu = 1e-4;  // slipping tolerance [m/s]
    double dt = 1e-3;  // time step [s]; velocities are (x - x0) / dt

    double K2() const { return 15.0 / nu; }
};

/// Smoothed friction response of one contact pair. The Jacobian is the total
/// derivative in the pair positions, friction being an implicit function of
/// the contact forces; it is generally nonsymmetric.
struct FrictionResponse {
    Vec12 force = Vec12::Zero();
    Mat12 jacobian = Mat12::Zero();
};

/// Unit contact normal of edge i from its two nodal contact forces.
Vec3 contact_normal(const Vec3& forceI, const Vec3& forceI1);

/// Tangential part of the beta-interpolated relative velocity of edge i
/// with respect to edge j.
Vec3 relative_tangential_velocity(const Vec12& nodalVelocities, double betaI, double betaJ,
                                  const Vec3& normal);

/// Sticking-to-sliding scale factor gamma in [0, 1).
double slip_ratio(double tangentialSpeed, double nu);

/// Friction forces and Jacobian for a pair, given the contact response at the
/// current positions x and the step-start positions x0. Contact ratios are
/// recovered from the nodal contact-force magnitudes. Returns zeros when the
/// normal force vanishes or the tangential velocity direction is undefined.
FrictionResponse friction_force_jacobian(const ContactResponse& contact, const Vec12& x,
                                         const Vec12& x0, const FrictionParams& params);

inline Vec12 friction_forces(const ContactResponse& contact, const Vec12& x, const Vec12& x0,
                             const FrictionParams& params)
{
    return friction_force_jacobian(contact, x, x0, params).force;
}

inline Mat12 friction_jacobian(const ContactResponse& contact, const Vec12& x, const Vec12& x0,
                               const FrictionParams& params)
{
    return friction_force_jacobian(contact, x, x0, params).jacobian;
}

} // namespace rodsim
