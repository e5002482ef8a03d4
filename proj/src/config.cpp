#include "rodsim/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace rodsim {

MaterialParams SimConfig::materialParams() const
{
    return MaterialParams::circular(youngsModulus, shearModulus(), density, radius);
}

ContactParams SimConfig::contactParams() const
{
    ContactParams p;
    p.h = radius;
    p.deltaBar = delta() / radius;
    p.stiffnessScale = stiffnessScale;
    p.deltaHat = candidateMarginOverH * radius;
    p.stiffness = 0.0; // adaptive; placeholder installed by the solver
    return p;
}

FrictionParams SimConfig::frictionParams() const
{
    FrictionParams p;
    p.mu = mu;
    p.nu = nu;
    p.dt = dt;
    return p;
}

RssParams SimConfig::rssParams() const
{
    RssParams p;
    p.viscosity = viscosity;
    p.epsilon = epsilonFactor * radius;
    return p;
}

void SimConfig::validate() const
{
    auto require = [](bool ok, const std::string& field, const std::string& why) {
        if (!ok)
            throw ConfigError("config field '" + field + "': " + why);
    };
    require(youngsModulus > 0, "material.youngs_modulus", "must be positive");
    require(poissonRatio > -1.0 && poissonRatio <= 0.5, "material.poisson_ratio",
            "must lie in (-1, 0.5]");
    require(density > 0, "material.density", "must be positive");
    require(radius > 0, "material.radius", "must be positive");
    require(deltaOverH > 0, "contact.delta_over_h", "must be positive");
    if (deltaMeters)
        require(*deltaMeters > 0, "contact.delta", "must be positive");
    require(candidateMarginOverH > deltaOverH, "contact.candidate_margin_over_h",
            "candidate margin must exceed the contact tolerance");
    require(stiffnessScale > 0, "contact.stiffness_scale", "must be positive");
    require(mu >= 0, "friction.mu", "must be nonnegative");
    require(nu > 0, "friction.nu", "must be positive");
    require(viscosity > 0, "fluid.viscosity", "must be positive");
    require(epsilonFactor > 0, "fluid.epsilon_factor", "must be positive");
    require(dt > 0, "solver.dt", "must be positive");
    require(solver.tol > 0, "solver.tol", "must be positive");
    require(solver.maxNewtonIters > 0, "solver.max_newton_iters", "must be positive");
    require(solver.m1 > 0 && solver.m1 < solver.m2 && solver.m2 < 1,
            "solver.line_search_m1/m2", "need 0 < m1 < m2 < 1");
    require(scenario.numFlagella >= 1, "scenario.num_flagella", "must be at least 1");
    require(scenario.nodesPerRod >= 4, "scenario.nodes_per_rod", "need at least 4 nodes");
    require(scenario.helixRadius > 0, "scenario.helix_radius", "must be positive");
    require(scenario.helixPitch > 0, "scenario.helix_pitch", "must be positive");
    require(scenario.axialLength > 0, "scenario.axial_length", "must be positive");
    require(scenario.numFlagella == 1 || scenario.polygonSide > 0, "scenario.polygon_side",
            "must be positive");
    require(duration >= 0, "run.duration", "must be nonnegative");
    require(stride >= 1, "run.stride", "must be at least 1");
}

namespace {

struct Setter {
    std::function<void(SimConfig&, const std::string&)> apply;
};

double toDouble(const std::string& field, const std::string& v)
{
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config field '" + field + "': cannot parse '" + v + "' as a number");
    }
}

int toInt(const std::string& field, const std::string& v)
{
    const double x = toDouble(field, v);
    const int i = static_cast<int>(std::lround(x));
    if (std::abs(x - i) > 1e-9)
        throw ConfigError("config field '" + field + "': expected an integer, got '" + v + "'");
    return i;
}

bool toBool(const std::string& field, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    throw ConfigError("config field '" + field + "': cannot parse '" + v + "' as a boolean");
}

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"material.youngs_modulus", {[](SimConfig& c, const std::string& v) { c.youngsModulus = toDouble("material.youngs_modulus", v); }}},
        {"material.poisson_ratio", {[](SimConfig& c, const std::string& v) { c.poissonRatio = toDouble("material.poisson_ratio", v); }}},
        {"material.density", {[](SimConfig& c, const std::string& v) { c.density = toDouble("material.density", v); }}},
        {"material.radius", {[](SimConfig& c, const std::string& v) { c.radius = toDouble("material.radius", v); }}},
        {"contact.delta_over_h", {[](SimConfig& c, const std::string& v) { c.deltaOverH = toDouble("contact.delta_over_h", v); }}},
        {"contact.delta", {[](SimConfig& c, const std::string& v) { c.deltaMeters = toDouble("contact.delta", v); }}},
        {"contact.candidate_margin_over_h", {[](SimConfig& c, const std::string& v) { c.candidateMarginOverH = toDouble("contact.candidate_margin_over_h", v); }}},
        {"contact.stiffness_scale", {[](SimConfig& c, const std::string& v) { c.stiffnessScale = toDouble("contact.stiffness_scale", v); }}},
        {"friction.mu", {[](SimConfig& c, const std::string& v) { c.mu = toDouble("friction.mu", v); }}},
        {"friction.nu", {[](SimConfig& c, const std::string& v) { c.nu = toDouble("friction.nu", v); }}},
        {"fluid.enabled", {[](SimConfig& c, const std::string& v) { c.fluidEnabled = toBool("fluid.enabled", v); }}},
        {"fluid.viscosity", {[](SimConfig& c, const std::string& v) { c.viscosity = toDouble("fluid.viscosity", v); }}},
        {"fluid.epsilon_factor", {[](SimConfig& c, const std::string& v) { c.epsilonFactor = toDouble("fluid.epsilon_factor", v); }}},
        {"solver.dt", {[](SimConfig& c, const std::string& v) { c.dt = toDouble("solver.dt", v); }}},
        {"solver.tol", {[](SimConfig& c, const std::string& v) { c.solver.tol = toDouble("solver.tol", v); }}},
        {"solver.tol_floor", {[](SimConfig& c, const std::string& v) { c.solver.tolFloor = toDouble("solver.tol_floor", v); }}},
        {"solver.max_newton_iters", {[](SimConfig& c, const std::string& v) { c.solver.maxNewtonIters = toInt("solver.max_newton_iters", v); }}},
        {"solver.line_search_m1", {[](SimConfig& c, const std::string& v) { c.solver.m1 = toDouble("solver.line_search_m1", v); }}},
        {"solver.line_search_m2", {[](SimConfig& c, const std::string& v) { c.solver.m2 = toDouble("solver.line_search_m2", v); }}},
        {"solver.max_line_search_iters", {[](SimConfig& c, const std::string& v) { c.solver.maxLineSearchIters = toInt("solver.max_line_search_iters", v); }}},
        {"solver.line_search_collapse_tol", {[](SimConfig& c, const std::string& v) { c.solver.lsCollapseTol = toDouble("solver.line_search_collapse_tol", v); }}},
        {"scenario.num_flagella", {[](SimConfig& c, const std::string& v) { c.scenario.numFlagella = toInt("scenario.num_flagella", v); }}},
        {"scenario.helix_radius", {[](SimConfig& c, const std::string& v) { c.scenario.helixRadius = toDouble("scenario.helix_radius", v); }}},
        {"scenario.helix_pitch", {[](SimConfig& c, const std::string& v) { c.scenario.helixPitch = toDouble("scenario.helix_pitch", v); }}},
        {"scenario.axial_length", {[](SimConfig& c, const std::string& v) { c.scenario.axialLength = toDouble("scenario.axial_length", v); }}},
        {"scenario.polygon_side", {[](SimConfig& c, const std::string& v) { c.scenario.polygonSide = toDouble("scenario.polygon_side", v); }}},
        {"scenario.omega", {[](SimConfig& c, const std::string& v) { c.scenario.omega = toDouble("scenario.omega", v); }}},
        {"scenario.nodes_per_rod", {[](SimConfig& c, const std::string& v) { c.scenario.nodesPerRod = toInt("scenario.nodes_per_rod", v); }}},
        {"scenario.handedness", {[](SimConfig& c, const std::string& v) {
             if (v == "right")
                 c.scenario.rightHanded = true;
             else if (v == "left")
                 c.scenario.rightHanded = false;
             else
                 throw ConfigError("config field 'scenario.handedness': expected right or left");
         }}},
        {"scenario.phase", {[](SimConfig& c, const std::string& v) { c.scenario.phase = toDouble("scenario.phase", v); }}},
        {"run.duration", {[](SimConfig& c, const std::string& v) { c.duration = toDouble("run.duration", v); }}},
        {"run.out_dir", {[](SimConfig& c, const std::string& v) { c.outDir = v; }}},
        {"run.stride", {[](SimConfig& c, const std::string& v) { c.stride = toInt("run.stride", v); }}},
        {"run.seed", {[](SimConfig& c, const std::string& v) { c.seed = static_cast<unsigned>(toInt("run.seed", v)); }}},
    };
    return table;
}

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    return s.substr(a, b - a + 1);
}

} // namespace

SimConfig parse_config_text(const std::string& text)
{
    SimConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineNo = 0;
    bool sawDelta = false, sawDeltaOverH = false;
    while (std::getline(in, line)) {
        ++lineNo;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineNo) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineNo) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string full = section.empty() ? key : section + "." + key;
        const auto it = setters().find(full);
        if (it == setters().end())
            throw ConfigError("unknown config key '" + full + "' (line " + std::to_string(lineNo)
                              + ")");
        it->second.apply(cfg, value);
        sawDelta = sawDelta || full == "contact.delta";
        sawDeltaOverH = sawDeltaOverH || full == "contact.delta_over_h";
    }
    if (sawDelta && sawDeltaOverH)
        throw ConfigError("config keys 'contact.delta' and 'contact.delta_over_h' are exclusive");
    return cfg;
}

SimConfig parse_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string SimConfig::toText() const
{
    std::ostringstream o;
    o.precision(17);
    o << "[material]\n";
    o << "youngs_modulus = " << youngsModulus << "\n";
    o << "poisson_ratio = " << poissonRatio << "\n";
    o << "density = " << density << "\n";
    o << "radius = " << radius << "\n\n";
    o << "[contact]\n";
    if (deltaMeters)
        o << "delta = " << *deltaMeters << "\n";
    else
        o << "delta_over_h = " << deltaOverH << "\n";
    o << "candidate_margin_over_h = " << candidateMarginOverH << "\n";
    o << "stiffness_scale = " << stiffnessScale << "\n\n";
    o << "[friction]\n";
    o << "mu = " << mu << "\n";
    o << "nu = " << nu << "\n\n";
    o << "[fluid]\n";
    o << "enabled = " << (fluidEnabled ? "true" : "false") << "\n";
    o << "viscosity = " << viscosity << "\n";
    o << "epsilon_factor = " << epsilonFactor << "\n\n";
    o << "[solver]\n";
    o << "dt = " << dt << "\n";
    o << "tol = " << solver.tol << "\n";
    o << "tol_floor = " << solver.tolFloor << "\n";
    o << "max_newton_iters = " << solver.maxNewtonIters << "\n";
    o << "line_search_m1 = " << solver.m1 << "\n";
    o << "line_search_m2 = " << solver.m2 << "\n";
    o << "max_line_search_iters = " << solver.maxLineSearchIters << "\n";
    o << "line_search_collapse_tol = " << solver.lsCollapseTol << "\n\n";
    o << "[scenario]\n";
    o << "num_flagella = " << scenario.numFlagella << "\n";
    o << "helix_radius = " << scenario.helixRadius << "\n";
    o << "helix_pitch = " << scenario.helixPitch << "\n";
    o << "axial_length = " << scenario.axialLength << "\n";
    o << "polygon_side = " << scenario.polygonSide << "\n";
    o << "omega = " << scenario.omega << "\n";
    o << "nodes_per_rod = " << scenario.nodesPerRod << "\n";
    o << "handedness = " << (scenario.rightHanded ? "right" : "left") << "\n";
    o << "phase = " << scenario.phase << "\n\n";
    o << "[run]\n";
    o << "duration = " << duration << "\n";
    o << "out_dir = " << outDir << "\n";
    o << "stride = " << stride << "\n";
    o << "seed = " << seed << "\n";
    return o.str();
}

} // namespace rodsim
