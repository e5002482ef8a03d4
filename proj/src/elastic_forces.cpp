#include "rodsim/elastic_forces.hpp"

#include <cmath>

namespace rodsim {

namespace {

// Derivatives of one material-curvature component kappa = 0.5*(de + df).kb
// on the two-edge stencil, where (de, df) is the director pair entering the
// dot product and (oe, of) is the other material director pair. thetaSign is
// the sign of d(kappa)/d(theta) = thetaSign * 0.5 * o.kb.
struct CurvatureDerivs {
    Vec11 grad;
    Mat11 hess;
};

struct StencilGeometry {
    double ne, nf, chi;
    Vec3 te, tf, tilde_t, kb;
};

CurvatureDerivs curvatureComponentDerivs(const StencilGeometry& g, double kappa,
                                         const Vec3& de, const Vec3& df,
                                         const Vec3& oe, const Vec3& of, double thetaSign)
{
    const double ne = g.ne, nf = g.nf, chi = g.chi;
    const Vec3 &te = g.te, &tf = g.tf, &tt = g.tilde_t, &kb = g.kb;
    const Vec3 tilde_d = (de + df) / chi;

    const Vec3 dKde = (1.0 / ne) * (-kappa * tt + tf.cross(tilde_d));
    const Vec3 dKdf = (1.0 / nf) * (-kappa * tt - te.cross(tilde_d));
    const double dKdte = thetaSign * 0.5 * oe.dot(kb);
    const double dKdtf = thetaSign * 0.5 * of.dot(kb);

    CurvatureDerivs out;
    out.grad.setZero();
    out.grad.segment<3>(0) = -dKde;
    out.grad[3] = dKdte;
    out.grad.segment<3>(4) = dKde - dKdf;
    out.grad[7] = dKdtf;
    out.grad.segment<3>(8) = dKdf;

    const double ne2 = ne * ne, nf2 = nf * nf;
    const Mat3 Id = Mat3::Identity();
    const Mat3 tt_o_tt = tt * tt.transpose();

    const Vec3 tf_c_d = tf.cross(tilde_d);
    const Vec3 te_c_d = te.cross(tilde_d);
    const Mat3 tf_c_d_o_tt = tf_c_d * tt.transpose();
    const Mat3 te_c_d_o_tt = te_c_d * tt.transpose();
    const Mat3 kb_o_de = kb * de.transpose();
    const Mat3 kb_o_df = kb * df.transpose();

    const Mat3 D2De2 = (1.0 / ne2) * (2.0 * kappa * tt_o_tt - tf_c_d_o_tt - tf_c_d_o_tt.transpose())
        - (kappa / (chi * ne2)) * (Id - te * te.transpose())
        + (1.0 / (4.0 * ne2)) * (kb_o_de + kb_o_de.transpose());
    const Mat3 D2Df2 = (1.0 / nf2) * (2.0 * kappa * tt_o_tt + te_c_d_o_tt + te_c_d_o_tt.transpose())
        - (kappa / (chi * nf2)) * (Id - tf * tf.transpose())
        + (1.0 / (4.0 * nf2)) * (kb_o_df + kb_o_df.transpose());
    const Mat3 D2DeDf = (-kappa / (chi * ne * nf)) * (Id + te * tf.transpose())
        + (1.0 / (ne * nf)) * (2.0 * kappa * tt_o_tt - tf_c_d_o_tt + te_c_d_o_tt.transpose()
                               - crossMat(tilde_d));
    const Mat3 D2DfDe = D2DeDf.transpose();

    // theta second derivatives; d(o)/d(theta) works out so that
    // d2(kappa)/d(theta)^2 = -0.5 * kb . d on both components
    const double D2Dte2 = -0.5 * kb.dot(de);
    const double D2Dtf2 = -0.5 * kb.dot(df);

    const Vec3 D2DeDte = thetaSign * (1.0 / ne) * (-0.5 * kb.dot(oe) * tt + (1.0 / chi) * tf.cross(oe));
    const Vec3 D2DeDtf = thetaSign * (1.0 / ne) * (-0.5 * kb.dot(of) * tt + (1.0 / chi) * tf.cross(of));
    const Vec3 D2DfDte = thetaSign * (1.0 / nf) * (-0.5 * kb.dot(oe) * tt - (1.0 / chi) * te.cross(oe));
    const Vec3 D2DfDtf = thetaSign * (1.0 / nf) * (-0.5 * kb.dot(of) * tt - (1.0 / chi) * te.cross(of));

    Mat11& H = out.hess;
    H.setZero();
    // position-position blocks (p = x_{i-1}, q = x_i, r = x_{i+1})
    H.block<3, 3>(0, 0) = D2De2;
    H.block<3, 3>(0, 4) = -D2De2 + D2DeDf;
    H.block<3, 3>(0, 8) = -D2DeDf;
    H.block<3, 3>(4, 0) = -D2De2 + D2DfDe;
    H.block<3, 3>(4, 4) = D2De2 - D2DeDf - D2DfDe + D2Df2;
    H.block<3, 3>(4, 8) = D2DeDf - D2Df2;
    H.block<3, 3>(8, 0) = -D2DfDe;
    H.block<3, 3>(8, 4) = D2DfDe - D2Df2;
    H.block<3, 3>(8, 8) = D2Df2;
    // theta-position blocks
    const Vec3 dTe_p = -D2DeDte;
    const Vec3 dTe_q = D2DeDte - D2DfDte;
    const Vec3 dTe_r = D2DfDte;
    const Vec3 dTf_p = -D2DeDtf;
    const Vec3 dTf_q = D2DeDtf - D2DfDtf;
    const Vec3 dTf_r = D2DfDtf;
    H.block<1, 3>(3, 0) = dTe_p.transpose();
    H.block<1, 3>(3, 4) = dTe_q.transpose();
    H.block<1, 3>(3, 8) = dTe_r.transpose();
    H.block<3, 1>(0, 3) = dTe_p;
    H.block<3, 1>(4, 3) = dTe_q;
    H.block<3, 1>(8, 3) = dTe_r;
    H.block<1, 3>(7, 0) = dTf_p.transpose();
    H.block<1, 3>(7, 4) = dTf_q.transpose();
    H.block<1, 3>(7, 8) = dTf_r.transpose();
    H.block<3, 1>(0, 7) = dTf_p;
    H.block<3, 1>(4, 7) = dTf_q;
    H.block<3, 1>(8, 7) = dTf_r;
    // theta-theta
    H(3, 3) = D2Dte2;
    H(7, 7) = D2Dtf2;
    return out;
}

// Derivatives of the reference twist on the stencil (positions only).
void refTwistDerivs(const StencilGeometry& g, Vec11& grad, Mat11& hess)
{
    const double ne = g.ne, nf = g.nf, chi = g.chi;
    const Vec3 &te = g.te, &tf = g.tf, &tt = g.tilde_t, &kb = g.kb;

    const Vec3 dmde = kb / (2.0 * ne); // d(refTwist)/d(e^{i-1})
    const Vec3 dmdf = kb / (2.0 * nf); // d(refTwist)/d(e^i)

    grad.setZero();
    grad.segment<3>(0) = -dmde;
    grad[3] = -1.0; // d(tau)/d(theta^{i-1})
    grad.segment<3>(4) = dmde - dmdf;
    grad[7] = 1.0;
    grad.segment<3>(8) = dmdf;

    const double ne2 = ne * ne, nf2 = nf * nf;
    const Mat3 D2De2 = -0.25 / ne2 * (kb * (te + tt).transpose() + (te + tt) * kb.transpose());
    const Mat3 D2Df2 = -0.25 / nf2 * (kb * (tf + tt).transpose() + (tf + tt) * kb.transpose());
    const Mat3 D2DeDf = 0.5 / (ne * nf) * (2.0 / chi * crossMat(te) - kb * tt.transpose());
    const Mat3 D2DfDe = D2DeDf.transpose();

    hess.setZero();
    hess.block<3, 3>(0, 0) = D2De2;
    hess.block<3, 3>(0, 4) = -D2De2 + D2DeDf;
    hess.block<3, 3>(0, 8) = -D2DeDf;
    hess.block<3, 3>(4, 0) = -D2De2 + D2DfDe;
    hess.block<3, 3>(4, 4) = D2De2 - D2DeDf - D2DfDe + D2Df2;
    hess.block<3, 3>(4, 8) = D2DeDf - D2Df2;
    hess.block<3, 3>(8, 0) = -D2DfDe;
    hess.block<3, 3>(8, 4) = D2DfDe - D2Df2;
    hess.block<3, 3>(8, 8) = D2Df2;
}

StencilGeometry stencilGeometry(const RodState& rod, int i)
{
    StencilGeometry g;
    g.ne = rod.edgeLength(i - 1);
    g.nf = rod.edgeLength(i);
    g.te = rod.tangent(i - 1);
    g.tf = rod.tangent(i);
    g.chi = 1.0 + g.te.dot(g.tf);
    g.tilde_t = (g.te + g.tf) / g.chi;
    g.kb = rod.curvatureBinormal(i);
    return g;
}

// Stretching energy Hessian block of one edge w.r.t. either endpoint.
Mat3 stretchHessBlock(const Vec3& tangent, double len, double restLen, double EA)
{
    const Mat3 ttT = tangent * tangent.transpose();
    const double eps = len / restLen - 1.0;
    return EA * (ttT / restLen + eps * (Mat3::Identity() - ttT) / len);
}

} // namespace

BendTwistStencil bend_twist_stencil(const RodState& rod, int node)
{
    const StencilGeometry g = stencilGeometry(rod, node);
    const int ep = node - 1, ec = node;
    const Vec3 m1e = rod.matDirector1(ep), m1f = rod.matDirector1(ec);
    const Vec3 m2e = rod.matDirector2(ep), m2f = rod.matDirector2(ec);

    BendTwistStencil s;
    s.kappa = rod.materialCurvatures(node);
    s.tau = rod.twistStrain(node);

    const CurvatureDerivs k1 = curvatureComponentDerivs(g, s.kappa[0], m2e, m2f, m1e, m1f, -1.0);
    const CurvatureDerivs k2 = curvatureComponentDerivs(g, s.kappa[1], m1e, m1f, m2e, m2f, 1.0);
    s.gradKappa1 = k1.grad;
    s.gradKappa2 = k2.grad;
    s.hessKappa1 = k1.hess;
    s.hessKappa2 = k2.hess;
    refTwistDerivs(g, s.gradTau, s.hessTau);
    return s;
}

ElasticEnergy elastic_energy(const RodState& rod, const MaterialParams& mat)
{
    ElasticEnergy e;
    const double EA = mat.youngs * mat.area;
    const double EI1 = mat.youngs * mat.I1;
    const double EI2 = mat.youngs * mat.I2;
    const double GJ = mat.shear * mat.polarJ;

    for (int k = 0; k < rod.numEdges(); ++k) {
        const double eps = rod.stretchStrain(k);
        e.stretch += 0.5 * EA * eps * eps * rod.restEdgeLength(k);
    }
    for (int i = 1; i < rod.numNodes() - 1; ++i) {
        const Vec2 kap = rod.materialCurvatures(i);
        const Vec2 dk = kap - rod.restCurvature(i);
        const double vl = rod.voronoiLength(i);
        e.bend += 0.5 / vl * (EI1 * dk[0] * dk[0] + EI2 * dk[1] * dk[1]);
        const double tau = rod.twistStrain(i);
        e.twist += 0.5 * GJ / vl * tau * tau;
    }
    return e;
}

VecX internal_forces(const RodState& rod, const MaterialParams& mat)
{
    VecX f = VecX::Zero(rod.numDofs());
    accumulate_internal_forces(rod, mat, 0, f);
    return f;
}

void accumulate_internal_forces(const RodState& rod, const MaterialParams& mat, int offset,
                                VecX& force)
{
    const double EA = mat.youngs * mat.area;
    const double EI1 = mat.youngs * mat.I1;
    const double EI2 = mat.youngs * mat.I2;
    const double GJ = mat.shear * mat.polarJ;

    for (int k = 0; k < rod.numEdges(); ++k) {
        const double eps = rod.stretchStrain(k);
        const Vec3 g = EA * eps * rod.tangent(k); // dE/dx_{k+1}
        force.segment<3>(offset + 4 * k) += g;
        force.segment<3>(offset + 4 * (k + 1)) -= g;
    }
    for (int i = 1; i < rod.numNodes() - 1; ++i) {
        const BendTwistStencil s = bend_twist_stencil(rod, i);
        const Vec2 dk = s.kappa - rod.restCurvature(i);
        const double vl = rod.voronoiLength(i);
        const Vec11 dE = (EI1 * dk[0] * s.gradKappa1 + EI2 * dk[1] * s.gradKappa2) / vl
            + (GJ / vl) * s.tau * s.gradTau;
        force.segment<11>(offset + 4 * (i - 1)) -= dE;
    }
}

MatX internal_jacobian(const RodState& rod, const MaterialParams& mat)
{
    const int n = rod.numDofs();
    MatX H = MatX::Zero(n, n);
    std::vector<Eigen::Triplet<double>> trips;
    accumulate_internal_jacobian(rod, mat, 0, trips);
    for (const auto& t : trips)
        H(t.row(), t.col()) += t.value();
    return H;
}

void accumulate_internal_jacobian(const RodState& rod, const MaterialParams& mat, int offset,
                                  std::vector<Eigen::Triplet<double>>& triplets)
{
    const double EA = mat.youngs * mat.area;
    const double EI1 = mat.youngs * mat.I1;
    const double EI2 = mat.youngs * mat.I2;
    const double GJ = mat.shear * mat.polarJ;

    auto pushBlock3 = [&](int r, int c, const Mat3& b) {
        for (int a = 0; a < 3; ++a)
            for (int bb = 0; bb < 3; ++bb)
                triplets.emplace_back(offset + r + a, offset + c + bb, b(a, bb));
    };

    for (int k = 0; k < rod.numEdges(); ++k) {
        const Mat3 M = stretchHessBlock(rod.tangent(k), rod.edgeLength(k), rod.restEdgeLength(k), EA);
        pushBlock3(4 * k, 4 * k, M);
        pushBlock3(4 * k, 4 * (k + 1), -M);
        pushBlock3(4 * (k + 1), 4 * k, -M);
        pushBlock3(4 * (k + 1), 4 * (k + 1), M);
    }
    for (int i = 1; i < rod.numNodes() - 1; ++i) {
        const BendTwistStencil s = bend_twist_stencil(rod, i);
        const Vec2 dk = s.kappa - rod.restCurvature(i);
        const double vl = rod.voronoiLength(i);
        Mat11 H = (EI1 * (s.gradKappa1 * s.gradKappa1.transpose() + dk[0] * s.hessKappa1)
                   + EI2 * (s.gradKappa2 * s.gradKappa2.transpose() + dk[1] * s.hessKappa2)) / vl
            + (GJ / vl) * (s.gradTau * s.gradTau.transpose() + s.tau * s.hessTau);
        const int base = 4 * (i - 1);
        for (int a = 0; a < 11; ++a)
            for (int b = 0; b < 11; ++b)
                triplets.emplace_back(offset + base + a, offset + base + b, H(a, b));
    }
}

} // namespace rodsim
