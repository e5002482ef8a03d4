#include "rodsim/contact_model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace rodsim {

double contact_energy(double dBar, double deltaBar)
{
    double e, de, d2e;
    contact_energy_derivs(dBar, deltaBar, e, de, d2e);
    return e;
}

void contact_energy_derivs(double dBar, double deltaBar, double& e, double& de, double& d2e)
{
    if (dBar <= 0.0)
        throw NonPositiveDistance("scaled contact distance <= 0 (centerlines crossed)");
    if (dBar >= 2.0 + deltaBar) {
        e = de = d2e = 0.0;
        return;
    }
    if (dBar <= 2.0 - deltaBar) {
        const double g = 2.0 - dBar;
        e = g * g;
        de = -2.0 * g;
        d2e = 2.0;
        return;
    }
    const double k1 = 15.0 / deltaBar;
    const double z = k1 * (2.0 - dBar); // in [-15, 15] by construction
    const double sp = softplus(z);
    const double sg = logistic(z);
    e = (sp / k1) * (sp / k1);
    de = -2.0 * sp * sg / k1;
    d2e = 2.0 * (sg * sg + sp * sg * (1.0 - sg));
}

namespace {

// 3x12 interpolation matrix applied as block weights: d = G(beta) x.
Eigen::Matrix<double, 3, 12> interpMatrix(double betaI, double betaJ)
{
    Eigen::Matrix<double, 3, 12> G = Eigen::Matrix<double, 3, 12>::Zero();
    G.block<3, 3>(0, 0) = (1.0 - betaI) * Mat3::Identity();
    G.block<3, 3>(0, 3) = betaI * Mat3::Identity();
    G.block<3, 3>(0, 6) = -(1.0 - betaJ) * Mat3::Identity();
    G.block<3, 3>(0, 9) = -betaJ * Mat3::Identity();
    return G;
}

} // namespace

DistanceDerivs distance_derivs(const Vec12& x)
{
    DistanceDerivs out;
    out.geom = classify_and_beta(x);
    const DistanceResult& r = out.geom;

    const Vec3 ei = x.segment<3>(3) - x.segment<3>(0);
    const Vec3 ej = x.segment<3>(9) - x.segment<3>(6);
    const Vec3 d = r.closestI - r.closestJ;
    const double dist = r.distance;
    if (dist < 1e-14)
        throw NonPositiveDistance("coincident closest points in distance derivative");

    const Eigen::Matrix<double, 3, 12> G = interpMatrix(r.betaI, r.betaJ);
    const Vec12 Sx = 2.0 * G.transpose() * d;
    Mat12 SxxStar = 2.0 * G.transpose() * G;

    // sensitivity of the interior (unclamped) contact ratios
    const bool freeI = r.betaI > 0.0 && r.betaI < 1.0;
    const bool freeJ = r.betaJ > 0.0 && r.betaJ < 1.0;
    const int m = (freeI ? 1 : 0) + (freeJ ? 1 : 0);
    if (m > 0) {
        Eigen::Matrix<double, 12, 2> Sxb;
        Eigen::Matrix2d Sbb;
        int col = 0;
        int idxI = -1, idxJ = -1;
        if (freeI) {
            Vec12 c = Vec12::Zero();
            c.segment<3>(0) = -d;
            c.segment<3>(3) = d;
            c += G.transpose() * ei;
            Sxb.col(col) = 2.0 * c;
            idxI = col++;
        }
        if (freeJ) {
            Vec12 c = Vec12::Zero();
            c.segment<3>(6) = d;
            c.segment<3>(9) = -d;
            c -= G.transpose() * ej;
            Sxb.col(col) = 2.0 * c;
            idxJ = col++;
        }
        Sbb.setZero();
        if (freeI)
            Sbb(idxI, idxI) = 2.0 * ei.squaredNorm();
        if (freeJ)
            Sbb(idxJ, idxJ) = 2.0 * ej.squaredNorm();
        if (freeI && freeJ) {
            Sbb(idxI, idxJ) = -2.0 * ei.dot(ej);
            Sbb(idxJ, idxI) = Sbb(idxI, idxJ);
        }
        if (m == 1) {
            const double diag = Sbb(0, 0);
            SxxStar -= Sxb.col(0) * Sxb.col(0).transpose() / diag;
        } else {
            // guard the inversion against (near-)parallel edges, where the
            // minimizer direction is flat; drop the degenerate eigenspace
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Sbb);
            const Eigen::Vector2d ev = es.eigenvalues();
            const double evMax = std::max(ev[0], ev[1]);
            Eigen::Matrix2d inv = Eigen::Matrix2d::Zero();
            for (int k = 0; k < 2; ++k)
                if (ev[k] > 1e-12 * evMax)
                    inv += es.eigenvectors().col(k) * es.eigenvectors().col(k).transpose() / ev[k];
            SxxStar -= Sxb.leftCols<2>() * inv * Sxb.leftCols<2>().transpose();
        }
    }

    out.grad = Sx / (2.0 * dist);
    out.hess = (SxxStar - 2.0 * out.grad * out.grad.transpose()) / (2.0 * dist);
    return out;
}

ContactResponse contact_force_jacobian(const Vec12& x, const ContactParams& params)
{
    const double h = params.h;
    const Vec12 xs = x / h;

    ContactResponse resp;
    const DistanceResult probe = classify_and_beta(xs);
    if (probe.distance <= 0.0)
        throw NonPositiveDistance("contact pair with coincident centerlines");
    if (probe.distance >= 2.0 + params.deltaBar)
        return resp; // outside the force-active band

    const DistanceDerivs dd = distance_derivs(xs);
    double e, de, d2e;
    contact_energy_derivs(dd.geom.distance, params.deltaBar, e, de, d2e);

    const double k = params.stiffness;
    resp.energy = k * e;
    // physical-coordinate scaling: gradient by 1/h, Hessian by 1/h^2
    resp.force = -(k / h) * de * dd.grad;
    resp.jacobian = -(k / (h * h)) * (d2e * dd.grad * dd.grad.transpose() + de * dd.hess);
    return resp;
}

double update_contact_stiffness(std::span<const double> candidateNodeForceNorms, double scale,
                                double previous)
{
    if (candidateNodeForceNorms.empty())
        return previous;
    const double fmax = *std::max_element(candidateNodeForceNorms.begin(),
                                          candidateNodeForceNorms.end());
    return fmax * scale;
}

} // namespace rodsim
