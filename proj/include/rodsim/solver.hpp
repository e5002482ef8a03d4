#pragma once

#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Sparse>

#include "rodsim/contact_geometry.hpp"
#include "rodsim/contact_model.hpp"
#include "rodsim/elastic_forces.hpp"
#include "rodsim/friction_model.hpp"
#include "rodsim/hydrodynamics.hpp"
#include "rodsim/rod_state.hpp"

namespace rodsim {

struct NonConvergence : SimError {
    using SimError::SimError;
};

struct SolverParams {
    double tol = 1e-4;       // convergence tolerance, relative to the first-iteration residual
    double tolFloor = 1e-10; // [N] absolute floor of the tolerance
    int maxNewtonIters = 50;
    double m1 = 0.1; // Goldstein-Price sufficient-decrease constant
    double m2 = 0.9; // Goldstein-Price step-bound constant
    int maxLineSearchIters = 20;
    double lsCollapseTol = 1e-6;
};

struct StepStats {
    bool converged = false;
    int newtonIters = 0;
    int lineSearchIters = 0;
    bool hadContact = false;
    int maxActiveContacts = 0;
    double residualFirst = 0.0;
    double residualLast = 0.0;
    double wallTimeSec = 0.0;
    std::vector<double> residualHistory; // per-iteration |F_free| before the update
    std::vector<double> alphaHistory;
    std::vector<bool> lsSatisfiedHistory;
};

/// Goldstein-Price bisection line search on g(alpha) = 1/2 |F(q - alpha dq)|^2.
/// d0 is the directional derivative of g at alpha = 0 (negative along a
/// descent direction); returns the first alpha satisfying
/// alpha m2 d0 <= g(alpha) - g(0) <= alpha m1 d0, or the interval midpoint
/// when the bracket collapses or the iteration budget runs out.
double line_search(const std::function<double(double)>& g, double g0, double d0,
                   const SolverParams& params, int* itersOut = nullptr, bool* satisfiedOut = nullptr);

/// Multi-rod backward-Euler system: concatenated rod DOFs, lumped diagonal
/// mass, free/prescribed partition, penalty contact with smoothed friction,
/// and explicit viscous drag from the fluid model.
class Simulation {
public:
    /// Prescribes fixed-DOF values as a function of time; entries of q that
    /// are not fixed must be left untouched.
    using BoundaryFn = std::function<void(double time, VecX& q)>;
    /// Additional explicit external force (no Jacobian contribution).
    using ExternalForceFn = std::function<VecX(double time, const std::vector<RodState>& rods)>;

    Simulation(std::vector<RodState> rods, MaterialParams material, ContactParams contact,
               FrictionParams friction, RssParams fluid, SolverParams solver);

    int numRods() const { return static_cast<int>(rods_.size()); }
    const std::vector<RodState>& rods() const { return rods_; }
    const RodState& rod(int r) const { return rods_[r]; }
    double time() const { return time_; }
    int totalDofs() const { return dofOffset_.back(); }
    int rodDofOffset(int r) const { return dofOffset_[r]; }

    void fixDof(int globalDof) { fixed_[globalDof] = true; }
    void fixNode(int r, int node);
    void fixTheta(int r, int edge);
    bool isFixed(int globalDof) const { return fixed_[globalDof]; }

    void setBoundaryFn(BoundaryFn fn) { boundaryFn_ = std::move(fn); }
    void setExternalForceFn(ExternalForceFn fn) { externalFn_ = std::move(fn); }
    void setHydroEnabled(bool on) { hydroEnabled_ = on; }
    void setContactEnabled(bool on) { contactEnabled_ = on; }

    const VecX& massDiagonal() const { return massDiag_; }
    double contactStiffness() const { return contact_.stiffness; }

    /// One backward-Euler step of size dt. The state advances to the final
    /// Newton iterate even when the iteration hits its budget; `converged`
    /// reports which case occurred.
    StepStats step(double dt);

    /// Residual of the equations of motion at the prescribed DOFs after the
    /// last step: the constraint reactions.
    const VecX& lastResidual() const { return lastResidual_; }

    /// Probing interface for verification: freeze the step context exactly as
    /// step(dt) would (boundary targets, explicit forces, candidate set,
    /// adaptive stiffness) and return the initial Newton iterate. The residual
    /// and Newton matrix can then be evaluated at arbitrary trial DOFs without
    /// advancing the state.
    VecX prepareStepContext(double dt);
    VecX residualAt(const VecX& q, double dt);
    Eigen::SparseMatrix<double> newtonMatrixAt(const VecX& q, double dt);

    /// Pack the committed positions/twists of all rods.
    VecX packDofs() const;

    /// Minimum distance over all cross-rod edge pairs at the committed
    /// positions (exhaustive sweep; +inf for a single rod).
    double minInterRodDistance() const;

private:
    struct Assembly {
        VecX residual;
        std::vector<Eigen::Triplet<double>> jacobian;
        int activeContacts = 0;
    };

    Assembly assemble(const VecX& q, double dt, bool withJacobian, bool firstIteration);
    std::vector<RodState> rodsAt(const VecX& q) const;

    std::vector<RodState> rods_;
    MaterialParams material_;
    ContactParams contact_;
    FrictionParams friction_;
    RssParams fluid_;
    SolverParams solver_;

    std::vector<int> dofOffset_;
    std::vector<bool> fixed_;
    VecX massDiag_;
    BoundaryFn boundaryFn_;
    ExternalForceFn externalFn_;
    bool hydroEnabled_ = true;
    bool contactEnabled_ = true;

    double time_ = 0.0;
    VecX lastResidual_;

    // per-step frozen context
    VecX qStart_;
    VecX hydroForce_;
    VecX extraForce_;
    CandidateSet candidates_;
};

} // namespace rodsim
