#include "rodsim/solver.hpp"

#include <Eigen/SparseLU>

#include <chrono>
#include <cmath>

namespace rodsim {

double line_search(const std::function<double(double)>& g, double g0, double d0,
                   const SolverParams& params, int* itersOut, bool* satisfiedOut)
{
    double alphaLo = 0.0;
    double alphaHi = 1.0;
    double alpha = 1.0;
    int iter = 0;
    bool satisfied = false;
    while (iter < params.maxLineSearchIters) {
        const double decrease = g(alpha) - g0;
        ++iter;
        if (alpha * params.m2 * d0 <= decrease && decrease <= alpha * params.m1 * d0) {
            satisfied = true;
            break;
        }
        if (decrease < alpha * params.m2 * d0)
            alphaLo = alpha;
        else
            alphaHi = alpha;
        if (std::abs(alphaHi - alphaLo) < params.lsCollapseTol) {
            alpha = 0.5 * (alphaLo + alphaHi);
            break;
        }
        alpha = 0.5 * (alphaLo + alphaHi);
    }
    if (itersOut)
        *itersOut = iter;
    if (satisfiedOut)
        *satisfiedOut = satisfied;
    return alpha;
}

Simulation::Simulation(std::vector<RodState> rods, MaterialParams material, ContactParams contact,
                       FrictionParams friction, RssParams fluid, SolverParams solver)
    : rods_(std::move(rods))
    , material_(material)
    , contact_(contact)
    , friction_(friction)
    , fluid_(fluid)
    , solver_(solver)
{
    dofOffset_.assign(rods_.size() + 1, 0);
    for (size_t r = 0; r < rods_.size(); ++r)
        dofOffset_[r + 1] = dofOffset_[r] + rods_[r].numDofs();
    fixed_.assign(dofOffset_.back(), false);

    // lumped mass: rho A dl per node coordinate, rho J |e| per twist DOF
    massDiag_ = VecX::Zero(dofOffset_.back());
    for (size_t r = 0; r < rods_.size(); ++r) {
        const RodState& rod = rods_[r];
        const int off = dofOffset_[r];
        for (int i = 0; i < rod.numNodes(); ++i) {
            const double m = material_.density * material_.area * rod.voronoiLength(i);
            massDiag_.segment<3>(off + 4 * i).setConstant(m);
            if (i < rod.numNodes() - 1)
                massDiag_[off + 4 * i + 3] = material_.density * material_.polarJ
                    * rod.restEdgeLength(i);
        }
    }
    lastResidual_ = VecX::Zero(dofOffset_.back());
    if (contact_.stiffness <= 0.0) {
        // elastic-force-scale placeholder until the first candidate detection
        const double ea = material_.youngs * material_.area;
        const double len = rods_.empty() ? 1.0 : rods_[0].restTotalLength();
        contact_.stiffness = contact_.stiffnessScale * (ea / len) * contact_.delta();
    }
}

void Simulation::fixNode(int r, int node)
{
    const int base = dofOffset_[r] + 4 * node;
    fixed_[base] = fixed_[base + 1] = fixed_[base + 2] = true;
}

void Simulation::fixTheta(int r, int edge)
{
    fixed_[dofOffset_[r] + 4 * edge + 3] = true;
}

VecX Simulation::packDofs() const
{
    VecX q(totalDofs());
    for (size_t r = 0; r < rods_.size(); ++r)
        q.segment(dofOffset_[r], rods_[r].numDofs()) = rods_[r].packDofs();
    return q;
}

std::vector<RodState> Simulation::rodsAt(const VecX& q) const
{
    std::vector<RodState> out;
    out.reserve(rods_.size());
    for (size_t r = 0; r < rods_.size(); ++r) {
        std::vector<Vec3> nodes;
        VecX thetas;
        RodState::unpackDofs(q.segment(dofOffset_[r], rods_[r].numDofs()), nodes, thetas);
        out.push_back(rods_[r].withUpdatedFrames(std::move(nodes), std::move(thetas)));
    }
    return out;
}

Simulation::Assembly Simulation::assemble(const VecX& q, double dt, bool withJacobian,
                                          bool firstIteration)
{
    Assembly out;
    const int n = totalDofs();
    out.residual = VecX::Zero(n);

    const std::vector<RodState> trial = rodsAt(q);

    // inertia: M (q - q_t - dt qdot_t) / dt^2
    VecX qdotStart(n);
    for (size_t r = 0; r < rods_.size(); ++r)
        qdotStart.segment(dofOffset_[r], rods_[r].numDofs()) = rods_[r].velocities();
    out.residual = massDiag_.cwiseProduct(q - qStart_ - dt * qdotStart) / (dt * dt);

    // elastic forces enter as -F_int
    for (size_t r = 0; r < rods_.size(); ++r) {
        VecX f = VecX::Zero(n);
        accumulate_internal_forces(trial[r], material_, dofOffset_[r], f);
        out.residual -= f;
        if (withJacobian)
            accumulate_internal_jacobian(trial[r], material_, dofOffset_[r], out.jacobian);
    }
    // explicit external contributions (frozen over the step)
    out.residual -= hydroForce_;
    out.residual -= extraForce_;

    if (withJacobian) {
        out.jacobian.reserve(out.jacobian.size() + n);
        for (int i = 0; i < n; ++i)
            out.jacobian.emplace_back(i, i, massDiag_[i] / (dt * dt));
    }

    if (!contactEnabled_)
        return out;

    if (firstIteration) {
        // adaptive stiffness from the contact-free force magnitudes of the
        // candidate nodes
        std::vector<double> norms;
        for (const EdgePairKey& k : candidates_.pairs) {
            const int nodes[4] = {k.edgeI, k.edgeI + 1, k.edgeJ, k.edgeJ + 1};
            const int rodOf[4] = {k.rodA, k.rodA, k.rodB, k.rodB};
            for (int a = 0; a < 4; ++a)
                norms.push_back(
                    out.residual.segment<3>(dofOffset_[rodOf[a]] + 4 * nodes[a]).norm());
        }
        contact_.stiffness = update_contact_stiffness(norms, contact_.stiffnessScale,
                                                      contact_.stiffness);
    }

    const auto active = refresh_contact_set(trial, candidates_, contact_.h, contact_.delta());
    out.activeContacts = static_cast<int>(active.size());

    for (const ActiveContact& ac : active) {
        const int base[4] = {dofOffset_[ac.key.rodA] + 4 * ac.key.edgeI,
                             dofOffset_[ac.key.rodA] + 4 * (ac.key.edgeI + 1),
                             dofOffset_[ac.key.rodB] + 4 * ac.key.edgeJ,
                             dofOffset_[ac.key.rodB] + 4 * (ac.key.edgeJ + 1)};
        Vec12 x, x0;
        for (int a = 0; a < 4; ++a) {
            x.segment<3>(3 * a) = q.segment<3>(base[a]);
            x0.segment<3>(3 * a) = qStart_.segment<3>(base[a]);
        }
        const ContactResponse contact = contact_force_jacobian(x, contact_);
        FrictionResponse fric;
        if (friction_.mu > 0.0) {
            FrictionParams fp = friction_;
            fp.dt = dt;
            fric = friction_force_jacobian(contact, x, x0, fp);
        }
        for (int a = 0; a < 4; ++a) {
            out.residual.segment<3>(base[a]) -= contact.force.segment<3>(3 * a);
            out.residual.segment<3>(base[a]) -= fric.force.segment<3>(3 * a);
        }
        if (withJacobian) {
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    for (int ca = 0; ca < 3; ++ca)
                        for (int cb = 0; cb < 3; ++cb) {
                            const double v = contact.jacobian(3 * a + ca, 3 * b + cb)
                                + fric.jacobian(3 * a + ca, 3 * b + cb);
                            if (v != 0.0)
                                out.jacobian.emplace_back(base[a] + ca, base[b] + cb, -v);
                        }
        }
    }
    return out;
}

VecX Simulation::prepareStepContext(double dt)
{
    const int n = totalDofs();
    const double tNext = time_ + dt;

    qStart_ = packDofs();

    // viscous drag and extra external forces are explicit: evaluated once from
    // the step-start state and held fixed through the Newton iterations
    hydroForce_ = VecX::Zero(n);
    if (hydroEnabled_)
        hydroForce_ = hydrodynamic_forces(rods_, fluid_);
    extraForce_ = VecX::Zero(n);
    if (externalFn_)
        extraForce_ = externalFn_(tNext, rods_);

    // initial guess: q(t_i) with the prescribed DOFs moved to their t_{i+1} values
    VecX q = qStart_;
    if (boundaryFn_)
        boundaryFn_(tNext, q);

    candidates_ = CandidateSet{};
    if (contactEnabled_)
        candidates_ = build_candidate_set(rodsAt(q), contact_.h, contact_.deltaHat);
    return q;
}

VecX Simulation::residualAt(const VecX& q, double dt)
{
    return assemble(q, dt, false, false).residual;
}

Eigen::SparseMatrix<double> Simulation::newtonMatrixAt(const VecX& q, double dt)
{
    const Assembly a = assemble(q, dt, true, false);
    Eigen::SparseMatrix<double> J(totalDofs(), totalDofs());
    J.setFromTriplets(a.jacobian.begin(), a.jacobian.end());
    J.makeCompressed();
    return J;
}

StepStats Simulation::step(double dt)
{
    const auto wallStart = std::chrono::steady_clock::now();
    StepStats stats;
    const int n = totalDofs();
    const double tNext = time_ + dt;

    VecX q = prepareStepContext(dt);

    // free-DOF index map
    std::vector<int> freeIdx;
    freeIdx.reserve(n);
    std::vector<int> toFree(n, -1);
    for (int i = 0; i < n; ++i)
        if (!fixed_[i]) {
            toFree[i] = static_cast<int>(freeIdx.size());
            freeIdx.push_back(i);
        }
    const int nFree = static_cast<int>(freeIdx.size());

    double tolAbs = solver_.tolFloor;
    Assembly asmLast;
    for (int iter = 0; iter < solver_.maxNewtonIters; ++iter) {
        asmLast = assemble(q, dt, true, iter == 0);
        ++stats.newtonIters;
        stats.maxActiveContacts = std::max(stats.maxActiveContacts, asmLast.activeContacts);
        stats.hadContact = stats.hadContact || asmLast.activeContacts > 0;

        VecX fFree(nFree);
        for (int i = 0; i < nFree; ++i)
            fFree[i] = asmLast.residual[freeIdx[i]];
        const double normf = fFree.norm();
        stats.residualHistory.push_back(normf);
        if (iter == 0) {
            stats.residualFirst = normf;
            tolAbs = std::max(solver_.tol * normf, solver_.tolFloor);
        }
        stats.residualLast = normf;
        if (normf <= tolAbs) {
            stats.converged = true;
            break;
        }

        // downsize the Jacobian to the free DOFs
        std::vector<Eigen::Triplet<double>> freeTrips;
        freeTrips.reserve(asmLast.jacobian.size());
        for (const auto& t : asmLast.jacobian) {
            const int r = toFree[t.row()];
            const int c = toFree[t.col()];
            if (r >= 0 && c >= 0)
                freeTrips.emplace_back(r, c, t.value());
        }
        Eigen::SparseMatrix<double> jFree(nFree, nFree);
        jFree.setFromTriplets(freeTrips.begin(), freeTrips.end());
        jFree.makeCompressed();

        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.analyzePattern(jFree);
        lu.factorize(jFree);
        if (lu.info() != Eigen::Success)
            throw SingularJacobian("Newton matrix factorization failed at t="
                                   + std::to_string(time_) + ", iteration "
                                   + std::to_string(iter));
        const VecX dqFree = lu.solve(fFree);
        if (!dqFree.allFinite())
            throw SingularJacobian("Newton solve produced non-finite update at t="
                                   + std::to_string(time_));

        const double g0 = 0.5 * normf * normf;
        auto makeG = [&](const VecX& dir) {
            return [&, dir](double alpha) {
                VecX qTrial = q;
                for (int i = 0; i < nFree; ++i)
                    qTrial[freeIdx[i]] -= alpha * dir[i];
                const Assembly a = assemble(qTrial, dt, false, false);
                double s = 0.0;
                for (int i = 0; i < nFree; ++i)
                    s += a.residual[freeIdx[i]] * a.residual[freeIdx[i]];
                return 0.5 * s;
            };
        };

        VecX dir = dqFree;
        double d0 = -fFree.dot(jFree * dir);
        int lsIters = 0;
        bool lsSatisfied = false;
        auto g = makeG(dir);
        double alpha = line_search(g, g0, d0, solver_, &lsIters, &lsSatisfied);
        stats.lineSearchIters += lsIters;
        double achieved = g(alpha);

        if (!lsSatisfied && achieved > g0 * (1.0 - 1e-3)) {
            // the plain Newton direction made no headway (typically a contact
            // state pinned at a classification boundary where the Hessian
            // jumps); retry with increasing diagonal damping, which blends
            // toward a small safe descent step
            double diagScale = 0.0;
            for (int k = 0; k < jFree.outerSize(); ++k)
                for (Eigen::SparseMatrix<double>::InnerIterator it(jFree, k); it; ++it)
                    if (it.row() == it.col())
                        diagScale = std::max(diagScale, std::abs(it.value()));
            Eigen::SparseMatrix<double> identity(nFree, nFree);
            identity.setIdentity();
            for (double lam : {1e-4, 1e-2, 1.0}) {
                Eigen::SparseMatrix<double> damped = jFree + (lam * diagScale) * identity;
                Eigen::SparseLU<Eigen::SparseMatrix<double>> dlu;
                dlu.compute(damped);
                if (dlu.info() != Eigen::Success)
                    continue;
                const VecX cand = dlu.solve(fFree);
                if (!cand.allFinite())
                    continue;
                auto gc = makeG(cand);
                const double dc0 = -fFree.dot(jFree * cand) - lam * diagScale * fFree.dot(cand);
                int iters2 = 0;
                bool ok2 = false;
                const double alpha2 = line_search(gc, g0, dc0, solver_, &iters2, &ok2);
                stats.lineSearchIters += iters2;
                const double achieved2 = gc(alpha2);
                if (achieved2 < achieved) {
                    dir = cand;
                    alpha = alpha2;
                    achieved = achieved2;
                    lsSatisfied = ok2;
                }
                if (ok2 || achieved2 < 0.9 * g0)
                    break;
            }
        }
        stats.alphaHistory.push_back(alpha);
        stats.lsSatisfiedHistory.push_back(lsSatisfied);

        for (int i = 0; i < nFree; ++i)
            q[freeIdx[i]] -= alpha * dir[i];
    }

    if (!stats.converged) {
        // final iterate is committed regardless; callers decide what a
        // non-converged step means for the run
        asmLast = assemble(q, dt, false, false);
        stats.residualLast = 0.0;
        for (int i = 0; i < nFree; ++i)
            stats.residualLast += asmLast.residual[freeIdx[i]] * asmLast.residual[freeIdx[i]];
        stats.residualLast = std::sqrt(stats.residualLast);
    }
    lastResidual_ = asmLast.residual;

    // commit: new velocities, transported frames
    const VecX qdot = (q - qStart_) / dt;
    std::vector<RodState> committed = rodsAt(q);
    for (size_t r = 0; r < rods_.size(); ++r) {
        committed[r].setVelocities(qdot.segment(dofOffset_[r], rods_[r].numDofs()));
        rods_[r] = std::move(committed[r]);
    }
    time_ = tNext;

    stats.wallTimeSec = std::chrono::duration<double>(std::chrono::steady_clock::now() - wallStart)
                            .count();
    return stats;
}

double Simulation::minInterRodDistance() const
{
    double best = std::numeric_limits<double>::infinity();
    for (size_t ra = 0; ra + 1 < rods_.size(); ++ra)
        for (size_t rb = ra + 1; rb < rods_.size(); ++rb)
            for (int i = 0; i < rods_[ra].numEdges(); ++i)
                for (int j = 0; j < rods_[rb].numEdges(); ++j) {
                    const DistanceResult d = classify_and_beta(rods_[ra].node(i),
                                                               rods_[ra].node(i + 1),
                                                               rods_[rb].node(j),
                                                               rods_[rb].node(j + 1));
                    best = std::min(best, d.distance);
                }
    return best;
}

} // namespace rodsim
