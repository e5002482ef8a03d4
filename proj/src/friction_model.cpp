#include "rodsim/friction_model.hpp"

#include <cmath>

namespace rodsim {

namespace {
constexpr double kTinyForce = 1e-30;      // [N]
constexpr double kTinySpeed = 1e-14;      // [m/s]
} // namespace

Vec3 contact_normal(const Vec3& forceI, const Vec3& forceI1)
{
    const Vec3 sum = forceI + forceI1;
    const double n = sum.norm();
    if (n <= 0.0)
        throw ZeroNormalForce("contact normal undefined: nodal contact forces cancel");
    return sum / n;
}

Vec3 relative_tangential_velocity(const Vec12& v, double betaI, double betaJ, const Vec3& normal)
{
    const Vec3 vi = (1.0 - betaI) * v.segment<3>(0) + betaI * v.segment<3>(3);
    const Vec3 vj = (1.0 - betaJ) * v.segment<3>(6) + betaJ * v.segment<3>(9);
    const Vec3 vrel = vi - vj;
    return vrel - vrel.dot(normal) * normal;
}

double slip_ratio(double tangentialSpeed, double nu)
{
    return 2.0 * logistic(15.0 / nu * tangentialSpeed) - 1.0;
}

FrictionResponse friction_force_jacobian(const ContactResponse& contact, const Vec12& x,
                                         const Vec12& x0, const FrictionParams& params)
{
    FrictionResponse out;
    if (params.mu == 0.0)
        return out;

    const Vec3 F[4] = {contact.force.segment<3>(0), contact.force.segment<3>(3),
                       contact.force.segment<3>(6), contact.force.segment<3>(9)};
    const Vec3 sumI = F[0] + F[1];
    const Vec3 sumJ = F[2] + F[3];
    const double sI = sumI.norm();
    const double sJ = sumJ.norm();
    if (sI <= kTinyForce || sJ <= kTinyForce)
        return out; // ZeroNormalForce case: pair skipped

    const Vec3 n = sumI / sI;
    const Vec3 nJ = sumJ / sJ;
    const double m[4] = {F[0].norm(), F[1].norm(), F[2].norm(), F[3].norm()};
    // contact ratios recovered from the force magnitudes
    const double betaI = m[1] / sI;
    const double betaJ = m[3] / sJ;

    const Vec12 vel = (x - x0) / params.dt;
    const Vec3 u[4] = {vel.segment<3>(0), vel.segment<3>(3), vel.segment<3>(6),
                       vel.segment<3>(9)};
    const Vec3 vi = (1.0 - betaI) * u[0] + betaI * u[1];
    const Vec3 vj = (1.0 - betaJ) * u[2] + betaJ * u[3];
    const Vec3 vrel = vi - vj;
    const Vec3 vT = vrel - vrel.dot(n) * n;
    const double sT = vT.norm();
    if (sT < kTinySpeed)
        return out; // direction undefined; gamma ~ 0 anyway

    const double K2 = params.K2();
    const double sig = logistic(K2 * sT);
    const double gamma = 2.0 * sig - 1.0;
    const double dgamma = 2.0 * K2 * sig * (1.0 - sig);
    const Vec3 vhat = vT / sT;

    const double sign[4] = {-1.0, -1.0, 1.0, 1.0};
    for (int a = 0; a < 4; ++a)
        out.force.segment<3>(3 * a) = sign[a] * params.mu * gamma * m[a] * vhat;

    // --- Jacobian ---
    const Mat3 Pn = Mat3::Identity() - n * n.transpose();
    const Mat3 vhat_o = vhat * vhat.transpose();
    // d(gamma * vhat)/d(vT)
    const Mat3 Dgv = dgamma * vhat_o + (gamma / sT) * (Mat3::Identity() - vhat_o);
    // d(vT)/d(n)
    const Mat3 Dn = -(n * vrel.transpose() + vrel.dot(n) * Mat3::Identity());

    // velocity part: d f / d x at fixed contact forces
    const double w[4] = {1.0 - betaI, betaI, -(1.0 - betaJ), -betaJ};
    Mat12 dfdx = Mat12::Zero();
    for (int a = 0; a < 4; ++a) {
        const Mat3 Ta = sign[a] * params.mu * m[a] * Dgv;
        const Mat3 TaPn = Ta * Pn;
        for (int b = 0; b < 4; ++b)
            dfdx.block<3, 3>(3 * a, 3 * b) = TaPn * (w[b] / params.dt);
    }

    // force part: d f / d F^c
    const Vec3 dui = u[1] - u[0];
    const Vec3 duj = u[3] - u[2];
    const Vec3 PnDui = Pn * dui;
    const Vec3 PnDuj = Pn * duj;

    // direction of d|F_a|/dF_a; a vanishing block keeps the edge normal
    const Vec3 fhat[4] = {m[0] > kTinyForce ? Vec3(F[0] / m[0]) : n,
                          m[1] > kTinyForce ? Vec3(F[1] / m[1]) : n,
                          m[2] > kTinyForce ? Vec3(F[2] / m[2]) : nJ,
                          m[3] > kTinyForce ? Vec3(F[3] / m[3]) : nJ};

    // d(betaI)/dF_b (b = 0, 1), d(betaJ)/dF_b (b = 2, 3)
    Vec3 dBetaI[4] = {Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    Vec3 dBetaJ[4] = {Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
    dBetaI[0] = -(betaI / sI) * n;
    dBetaI[1] = fhat[1] / sI - (betaI / sI) * n;
    dBetaJ[2] = -(betaJ / sJ) * nJ;
    dBetaJ[3] = fhat[3] / sJ - (betaJ / sJ) * nJ;

    Mat12 dfdF = Mat12::Zero();
    for (int a = 0; a < 4; ++a) {
        const Mat3 Ta = sign[a] * params.mu * m[a] * Dgv;
        for (int b = 0; b < 4; ++b) {
            Mat3 dvTdFb = PnDui * dBetaI[b].transpose() - PnDuj * dBetaJ[b].transpose();
            if (b < 2)
                dvTdFb += Dn * (Pn / sI);
            Mat3 block = Ta * dvTdFb;
            if (a == b)
                block += sign[a] * params.mu * gamma * vhat * fhat[a].transpose();
            dfdF.block<3, 3>(3 * a, 3 * b) = block;
        }
    }

    out.jacobian = dfdx + dfdF * contact.jacobian;
    return out;
}

} // namespace rodsim
