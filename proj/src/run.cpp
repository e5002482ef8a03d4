#include "rodsim/run.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

namespace rodsim {

RunResult run_simulation(const SimConfig& config)
{
    config.validate();
    if (config.outDir.empty())
        throw ConfigError("config field 'run.out_dir': required for a run");

    std::filesystem::create_directories(config.outDir);
    RunResult result;
    result.trajectoryPath = config.outDir + "/trajectory.csv";
    result.metricsPath = config.outDir + "/metrics.json";
    result.clampLogPath = config.outDir + "/clamp_forces.csv";
    result.configEchoPath = config.outDir + "/config_resolved.ini";

    {
        std::ofstream echo(result.configEchoPath);
        if (!echo)
            throw IoError("cannot write " + result.configEchoPath);
        echo << config.toText();
    }

    std::vector<RodState> rods;
    for (int r = 0; r < config.scenario.numFlagella; ++r)
        rods.push_back(build_helix(config.scenario, r));

    Simulation sim(std::move(rods), config.materialParams(), config.contactParams(),
                   config.frictionParams(), config.rssParams(), config.solver);
    sim.setHydroEnabled(config.fluidEnabled);
    apply_flagella_boundary(sim, config.scenario);

    std::ofstream traj(result.trajectoryPath);
    std::ofstream clampLog(result.clampLogPath);
    if (!traj || !clampLog)
        throw IoError("cannot open output files under " + config.outDir);
    write_trajectory_header(traj);
    write_clamp_header(clampLog);
    append_trajectory_record(traj, 0.0, sim.rods());
    traj.flush();

    RunMetrics& m = result.metrics;
    m.radius = config.radius;
    m.youngsModulus = config.youngsModulus;
    m.bendingInertia = config.materialParams().I1;
    m.minInterRodDistance = config.scenario.numFlagella > 1 ? sim.minInterRodDistance() : -1.0;

    const long numSteps = std::llround(config.duration / config.dt);
    int consecutiveFailures = 0;
    for (long stepIdx = 1; stepIdx <= numSteps; ++stepIdx) {
        const StepStats stats = sim.step(config.dt);
        ++m.steps;
        m.totalIters += stats.newtonIters;
        m.wallTimeSec += stats.wallTimeSec;
        if (stats.hadContact) {
            ++m.contactSteps;
            m.contactStepIters += stats.newtonIters;
            m.wallTimeContactStepsSec += stats.wallTimeSec;
        }
        if (!stats.converged) {
            ++m.unconvergedSteps;
            ++consecutiveFailures;
        } else {
            consecutiveFailures = 0;
        }

        if (config.scenario.numFlagella > 1) {
            const double d = sim.minInterRodDistance();
            if (m.minInterRodDistance < 0.0 || d < m.minInterRodDistance)
                m.minInterRodDistance = d;
        }

        // clamp reactions: equations-of-motion residual at the prescribed DOFs
        std::vector<Vec3> reactions(sim.numRods());
        for (int r = 0; r < sim.numRods(); ++r) {
            const int off = sim.rodDofOffset(r);
            reactions[r] = sim.lastResidual().segment<3>(off)
                + sim.lastResidual().segment<3>(off + 4);
        }
        append_clamp_record(clampLog, sim.time(), reactions);
        clampLog.flush();

        if (stepIdx % config.stride == 0) {
            append_trajectory_record(traj, sim.time(), sim.rods());
            traj.flush();
        }

        if (consecutiveFailures >= 2)
            break; // tangled beyond the solver's reach; end the run early
    }

    m.simEndTime = sim.time();
    m.abortedEarly = m.simEndTime < config.duration - 0.5 * config.dt;
    write_metrics_json(result.metricsPath, m);
    return result;
}

} // namespace rodsim
