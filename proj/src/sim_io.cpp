#include "rodsim/sim_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace rodsim {

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> splitCsv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

void write_trajectory_header(std::ostream& out)
{
    out << "time,rod,node,x,y,z,theta\n";
}

void append_trajectory_record(std::ostream& out, double time, const std::vector<RodState>& rods)
{
    const std::string ts = fmt(time);
    for (size_t r = 0; r < rods.size(); ++r) {
        const RodState& rod = rods[r];
        for (int i = 0; i < rod.numNodes(); ++i) {
            out << ts << ',' << r << ',' << i << ',' << fmt(rod.node(i).x()) << ','
                << fmt(rod.node(i).y()) << ',' << fmt(rod.node(i).z()) << ',';
            if (i < rod.numNodes() - 1)
                out << fmt(rod.theta(i));
            out << '\n';
        }
    }
}

Trajectory read_trajectory(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open trajectory file: " + path);
    std::string line;
    if (!std::getline(in, line) || splitCsv(line) != splitCsv("time,rod,node,x,y,z,theta"))
        throw IoError("bad trajectory header in " + path);

    Trajectory tr;
    int lineNo = 1;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty())
            continue;
        const auto f = splitCsv(line);
        if (f.size() != 7)
            throw IoError(path + ": line " + std::to_string(lineNo) + ": expected 7 columns");
        const double t = std::stod(f[0]);
        const int rod = std::stoi(f[1]);
        const int node = std::stoi(f[2]);
        if (rod == 0 && node == 0) {
            tr.times.push_back(t);
            tr.positions.emplace_back();
            tr.thetas.emplace_back();
        }
        if (tr.positions.empty())
            throw IoError(path + ": first row must be rod 0, node 0");
        auto& rec = tr.positions.back();
        auto& recTheta = tr.thetas.back();
        if (rod == static_cast<int>(rec.size())) {
            rec.emplace_back();
            recTheta.emplace_back();
        }
        rec[rod].push_back(Vec3(std::stod(f[3]), std::stod(f[4]), std::stod(f[5])));
        if (!f[6].empty())
            recTheta[rod].push_back(std::stod(f[6]));
    }
    if (tr.positions.empty())
        throw IoError(path + ": no records");
    tr.numRods = static_cast<int>(tr.positions.front().size());
    tr.nodesPerRod = static_cast<int>(tr.positions.front().front().size());
    for (const auto& rec : tr.positions) {
        if (static_cast<int>(rec.size()) != tr.numRods)
            throw IoError(path + ": inconsistent rod count across records");
        for (const auto& rod : rec)
            if (static_cast<int>(rod.size()) != tr.nodesPerRod)
                throw IoError(path + ": inconsistent node count across records");
    }
    return tr;
}

DiffSeries trajectory_diff(const Trajectory& a, const Trajectory& b, double h)
{
    if (a.numRods != b.numRods || a.nodesPerRod != b.nodesPerRod)
        throw ShapeMismatch("trajectory layouts differ (rods or nodes per rod)");
    if (a.times.size() != b.times.size())
        throw ShapeMismatch("trajectory time grids differ in length");
    if (h <= 0.0)
        throw ShapeMismatch("rod radius must be positive for the normalized difference");
    DiffSeries out;
    for (size_t k = 0; k < a.times.size(); ++k) {
        if (std::abs(a.times[k] - b.times[k]) > 1e-12 * std::max(1.0, std::abs(a.times[k])))
            throw ShapeMismatch("trajectory time stamps differ at record " + std::to_string(k));
        double sum = 0.0;
        for (int r = 0; r < a.numRods; ++r)
            for (int i = 0; i < a.nodesPerRod; ++i)
                sum += (a.positions[k][r][i] - b.positions[k][r][i]).norm();
        out.times.push_back(a.times[k]);
        out.ebar.push_back(sum / (a.numRods * a.nodesPerRod * h));
    }
    return out;
}

void write_diff_csv(const std::string& path, const DiffSeries& series)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write diff file: " + path);
    out << "time,ebar\n";
    for (size_t k = 0; k < series.times.size(); ++k)
        out << fmt(series.times[k]) << ',' << fmt(series.ebar[k]) << '\n';
}

void write_metrics_json(const std::string& path, const RunMetrics& m)
{
    nlohmann::json j;
    j["aipts"] = m.aipts();
    j["atpts_ms"] = m.atptsMs();
    j["aipts_contact"] = m.aiptsContact();
    j["atpts_contact_ms"] = m.atptsContactMs();
    j["total_iters"] = m.totalIters;
    j["steps"] = m.steps;
    j["contact_steps"] = m.contactSteps;
    j["contact_step_iters"] = m.contactStepIters;
    j["wall_time_s"] = m.wallTimeSec;
    j["wall_time_contact_steps_s"] = m.wallTimeContactStepsSec;
    j["sim_end_s"] = m.simEndTime;
    j["unconverged_steps"] = m.unconvergedSteps;
    j["aborted_early"] = m.abortedEarly;
    j["min_interrod_distance_m"] = m.minInterRodDistance;
    j["radius_m"] = m.radius;
    j["youngs_modulus_pa"] = m.youngsModulus;
    j["bending_inertia_m4"] = m.bendingInertia;
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write metrics file: " + path);
    out << j.dump(2) << '\n';
}

RunMetrics read_metrics_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open metrics file: " + path);
    nlohmann::json j;
    in >> j;
    RunMetrics m;
    m.steps = j.at("steps").get<long>();
    m.totalIters = j.at("total_iters").get<long>();
    m.contactSteps = j.at("contact_steps").get<long>();
    m.contactStepIters = j.at("contact_step_iters").get<long>();
    m.wallTimeSec = j.at("wall_time_s").get<double>();
    m.wallTimeContactStepsSec = j.at("wall_time_contact_steps_s").get<double>();
    m.simEndTime = j.at("sim_end_s").get<double>();
    m.unconvergedSteps = j.at("unconverged_steps").get<long>();
    m.abortedEarly = j.at("aborted_early").get<bool>();
    m.minInterRodDistance = j.at("min_interrod_distance_m").get<double>();
    m.radius = j.at("radius_m").get<double>();
    m.youngsModulus = j.at("youngs_modulus_pa").get<double>();
    m.bendingInertia = j.at("bending_inertia_m4").get<double>();
    return m;
}

void write_clamp_header(std::ostream& out)
{
    out << "time,rod,fx,fy,fz\n";
}

void append_clamp_record(std::ostream& out, double time, const std::vector<Vec3>& perRod)
{
    const std::string ts = fmt(time);
    for (size_t r = 0; r < perRod.size(); ++r)
        out << ts << ',' << r << ',' << fmt(perRod[r].x()) << ',' << fmt(perRod[r].y()) << ','
            << fmt(perRod[r].z()) << '\n';
}

ClampForceLog read_clamp_forces(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw MissingForceLog("clamp force log not found: " + path);
    std::string line;
    if (!std::getline(in, line) || splitCsv(line) != splitCsv("time,rod,fx,fy,fz"))
        throw IoError("bad clamp force header in " + path);
    ClampForceLog log;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto f = splitCsv(line);
        if (f.size() != 5)
            throw IoError(path + ": expected 5 columns");
        const double t = std::stod(f[0]);
        const int rod = std::stoi(f[1]);
        if (rod == 0) {
            log.times.push_back(t);
            log.perRod.emplace_back();
        }
        log.perRod.back().push_back(Vec3(std::stod(f[2]), std::stod(f[3]), std::stod(f[4])));
    }
    if (log.times.empty())
        throw MissingForceLog("clamp force log is empty: " + path);
    log.numRods = static_cast<int>(log.perRod.front().size());
    return log;
}

PropulsionSeries propulsion_series(const ClampForceLog& log, double h, double youngsModulus,
                                   double bendingInertia)
{
    PropulsionSeries out;
    const double scale = h * h / (youngsModulus * bendingInertia);
    double sum = 0.0;
    for (size_t k = 0; k < log.times.size(); ++k) {
        double fz = 0.0;
        for (const Vec3& f : log.perRod[k])
            fz += f.z();
        out.times.push_back(log.times[k]);
        out.axialForce.push_back(fz);
        out.normalized.push_back(fz * scale);
        sum += fz * scale;
    }
    out.timeAverage = out.normalized.empty() ? 0.0 : sum / out.normalized.size();
    return out;
}

void write_propulsion_csv(const std::string& path, const PropulsionSeries& series)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write propulsion file: " + path);
    out << "time,fp_z,fp_normalized\n";
    for (size_t k = 0; k < series.times.size(); ++k)
        out << fmt(series.times[k]) << ',' << fmt(series.axialForce[k]) << ','
            << fmt(series.normalized[k]) << '\n';
}

} // namespace rodsim
