// Command-line front end: run a simulation from a config file, diff two
// trajectories, or extract the normalized propulsive force from a run.
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rodsim/run.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"rodsim: elastic-rod contact simulation with viscous fluid coupling"};
    app.require_subcommand(1);

    // run
    auto* runCmd = app.add_subcommand("run", "run a simulation from a config file");
    std::string configPath;
    runCmd->add_option("config", configPath, "configuration file")->required();
    std::optional<double> optDuration;
    std::optional<std::string> optOutDir;
    std::optional<int> optStride;
    std::optional<double> optMu;
    std::optional<int> optNumFlagella;
    runCmd->add_option("--duration", optDuration, "simulated seconds (overrides config)");
    runCmd->add_option("--out-dir", optOutDir, "output directory (overrides config)");
    runCmd->add_option("--stride", optStride, "steps per trajectory record (overrides config)");
    runCmd->add_option("--mu", optMu, "friction coefficient (overrides config)");
    runCmd->add_option("--num-flagella", optNumFlagella, "number of rods (overrides config)");

    // diff
    auto* diffCmd = app.add_subcommand("diff", "normalized average difference of two trajectories");
    std::string trajA, trajB, diffOut;
    double diffRadius = 1e-3;
    diffCmd->add_option("traj_a", trajA, "first trajectory CSV")->required();
    diffCmd->add_option("traj_b", trajB, "second trajectory CSV")->required();
    diffCmd->add_option("-o,--output", diffOut, "output CSV")->required();
    diffCmd->add_option("--radius", diffRadius, "rod radius used for normalization [m]");

    // propulsion
    auto* propCmd = app.add_subcommand("propulsion", "normalized propulsive force of a run");
    std::string runDir, propOut;
    propCmd->add_option("run_dir", runDir, "directory written by `run`")->required();
    propCmd->add_option("-o,--output", propOut, "output CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*runCmd) {
            rodsim::SimConfig cfg;
            try {
                cfg = rodsim::parse_config_file(configPath);
                if (optDuration)
                    cfg.duration = *optDuration;
                if (optOutDir)
                    cfg.outDir = *optOutDir;
                if (optStride)
                    cfg.stride = *optStride;
                if (optMu)
                    cfg.mu = *optMu;
                if (optNumFlagella)
                    cfg.scenario.numFlagella = *optNumFlagella;
                cfg.validate();
                if (cfg.outDir.empty())
                    throw rodsim::ConfigError("run.out_dir missing (config or --out-dir)");
            } catch (const rodsim::ConfigError& e) {
                std::fprintf(stderr, "config error: %s\n", e.what());
                return kExitConfig;
            }
            const rodsim::RunResult res = rodsim::run_simulation(cfg);
            std::printf("steps %ld  iters %ld  aipts %.3f  aipts_contact %.3f  sim_end %.6g s%s\n",
                        res.metrics.steps, res.metrics.totalIters, res.metrics.aipts(),
                        res.metrics.aiptsContact(), res.metrics.simEndTime,
                        res.metrics.abortedEarly ? "  (ended early)" : "");
            std::printf("outputs: %s, %s, %s\n", res.trajectoryPath.c_str(),
                        res.metricsPath.c_str(), res.clampLogPath.c_str());
            return kExitOk;
        }
        if (*diffCmd) {
            const rodsim::Trajectory a = rodsim::read_trajectory(trajA);
            const rodsim::Trajectory b = rodsim::read_trajectory(trajB);
            const rodsim::DiffSeries series = rodsim::trajectory_diff(a, b, diffRadius);
            rodsim::write_diff_csv(diffOut, series);
            double maxE = 0.0;
            for (double e : series.ebar)
                maxE = std::max(maxE, e);
            std::printf("records %zu  max ebar %.6g\n", series.times.size(), maxE);
            return kExitOk;
        }
        if (*propCmd) {
            const rodsim::RunMetrics m = rodsim::read_metrics_json(runDir + "/metrics.json");
            const rodsim::ClampForceLog log = rodsim::read_clamp_forces(runDir
                                                                        + "/clamp_forces.csv");
            const rodsim::PropulsionSeries series = rodsim::propulsion_series(
                log, m.radius, m.youngsModulus, m.bendingInertia);
            rodsim::write_propulsion_csv(propOut, series);
            std::printf("records %zu  time-averaged normalized propulsive force %.6g\n",
                        series.times.size(), series.timeAverage);
            return kExitOk;
        }
    } catch (const rodsim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const rodsim::ShapeMismatch& e) {
        std::fprintf(stderr, "shape mismatch: %s\n", e.what());
        return kExitIo;
    } catch (const rodsim::MissingForceLog& e) {
        std::fprintf(stderr, "missing force log: %s\n", e.what());
        return kExitIo;
    } catch (const rodsim::IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return kExitIo;
    } catch (const rodsim::SimError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return kExitSolver;
    }
    return kExitOk;
}
