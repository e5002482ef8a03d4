#pragma once

#include <string>

#include "rodsim/config.hpp"
#include "rodsim/sim_io.hpp"

namespace rodsim {

struct RunResult {
    RunMetrics metrics;
    std::string trajectoryPath;
    std::string metricsPath;
    std::string clampLogPath;
    std::string configEchoPath;
};

/// Build the flagella scene from the configuration and march the time loop to
/// the configured duration, writing the trajectory, clamp-reaction log,
/// metrics, and a resolved-config echo into the output directory.
///
/// A step that exhausts its Newton budget is accepted and the run continues;
/// two consecutive such steps abort the run early (excessive tangling), with
/// the reached time recorded as sim_end_s.
RunResult run_simulation(const SimConfig& config);

} // namespace rodsim
