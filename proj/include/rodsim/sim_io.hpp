#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rodsim/rod_state.hpp"

namespace rodsim {

/// Node positions and edge twists over time, as stored in the trajectory CSV
/// (`time,rod,node,x,y,z,theta`; theta column empty on each rod's last node;
/// 17 significant digits).
struct Trajectory {
    int numRods = 0;
    int nodesPerRod = 0;
    std::vector<double> times;
    // record -> rod -> node
    std::vector<std::vector<std::vector<Vec3>>> positions;
    // record -> rod -> edge
    std::vector<std::vector<std::vector<double>>> thetas;
};

void write_trajectory_header(std::ostream& out);
void append_trajectory_record(std::ostream& out, double time, const std::vector<RodState>& rods);
Trajectory read_trajectory(const std::string& path);

/// Normalized average nodal difference between two trajectories on matching
/// time grids: sum of paired node distances over (M N h).
struct DiffSeries {
    std::vector<double> times;
    std::vector<double> ebar;
};
DiffSeries trajectory_diff(const Trajectory& a, const Trajectory& b, double h);
void write_diff_csv(const std::string& path, const DiffSeries& series);

/// Per-run statistics in the spirit of the convergence tables: average
/// iterations / wall time per step, over all steps and over contact-bearing
/// steps, plus run provenance needed by the propulsion tool.
struct RunMetrics {
    long steps = 0;
    long totalIters = 0;
    long contactSteps = 0;
    long contactStepIters = 0;
    double wallTimeSec = 0.0;
    double wallTimeContactStepsSec = 0.0;
    double simEndTime = 0.0;
    long unconvergedSteps = 0;
    bool abortedEarly = false;
    double minInterRodDistance = -1.0; // -1 when never measured (single rod)
    double radius = 0.0;
    double youngsModulus = 0.0;
    double bendingInertia = 0.0;

    double aipts() const { return steps ? static_cast<double>(totalIters) / steps : 0.0; }
    double aiptsContact() const
    {
        return contactSteps ? static_cast<double>(contactStepIters) / contactSteps : 0.0;
    }
    double atptsMs() const { return steps ? 1e3 * wallTimeSec / steps : 0.0; }
    double atptsContactMs() const
    {
        return contactSteps ? 1e3 * wallTimeContactStepsSec / contactSteps : 0.0;
    }
};

void write_metrics_json(const std::string& path, const RunMetrics& metrics);
RunMetrics read_metrics_json(const std::string& path);

/// Reaction forces at the clamped nodes, one row per step and rod:
/// `time,rod,fx,fy,fz`.
struct ClampForceLog {
    int numRods = 0;
    std::vector<double> times;
    std::vector<std::vector<Vec3>> perRod; // record -> rod
};

void write_clamp_header(std::ostream& out);
void append_clamp_record(std::ostream& out, double time, const std::vector<Vec3>& perRod);
ClampForceLog read_clamp_forces(const std::string& path);

/// Axial clamp reaction normalized by EI / h^2.
struct PropulsionSeries {
    std::vector<double> times;
    std::vector<double> axialForce; // total over rods [N]
    std::vector<double> normalized; // F h^2 / (E I)
    double timeAverage = 0.0;       // of the normalized series
};
PropulsionSeries propulsion_series(const ClampForceLog& log, double h, double youngsModulus,
                                   double bendingInertia);
void write_propulsion_csv(const std::string& path, const PropulsionSeries& series);

} // namespace rodsim
