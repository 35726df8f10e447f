#include "resopt/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace resopt {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16g", v);
    return buf;
}

std::string quoted_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const ModelParams& p) {
    const int n = traj.grid.n;
    if (int(traj.states.size()) != n + 1 || int(traj.controls.size()) != n) {
        throw std::invalid_argument("write_trajectory_csv: inconsistent trajectory");
    }
    const bool with_adjoints = traj.has_adjoints();
    out << kTrajectoryHeader << '\n';
    for (int k = 0; k <= n; ++k) {
        const double t = traj.grid.node(k);
        const State& x = traj.states[std::size_t(k)];
        const double u = traj.controls[std::size_t(k < n ? k : n - 1)];
        out << num(t) << ',' << num(x.s) << ',' << num(x.r) << ',' << num(x.e) << ',' << num(u);
        if (with_adjoints) {
            const Adjoint& lam = traj.adjoints[std::size_t(k)];
            const double disc = std::exp(-p.discount * t);
            const double sw = traj.switching[std::size_t(k)];
            const double swc = std::min(2.0, std::max(-2.0, sw));
            out << ',' << num(lam.lam_s) << ',' << num(lam.lam_r) << ',' << num(lam.lam_e) << ','
                << num(disc * lam.lam_s) << ',' << num(disc * lam.lam_r) << ','
                << num(disc * lam.lam_e) << ',' << num(sw) << ',' << num(swc);
        } else {
            out << ",,,,,,,,";
        }
        out << '\n';
    }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj, const ModelParams& p) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_trajectory_csv(out, traj, p);
    if (!out.good()) throw std::runtime_error("write failed: " + path);
}

ControlPath read_control_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> head = split(line);
    if (head.size() < 5 || head[0] != "t" || head[1] != "S" || head[2] != "R" || head[3] != "E" ||
        head[4] != "u") {
        throw std::runtime_error(path + ": header does not start with t,S,R,E,u");
    }
    std::vector<double> u;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> cells = split(line);
        if (cells.size() < 5) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": too few columns");
        }
        try {
            u.push_back(std::stod(cells[4]));
        } catch (const std::exception&) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": control column is not a number");
        }
    }
    if (u.size() < 2) throw std::runtime_error(path + ": fewer than two data rows");
    // The final node repeats the last interval's control; drop it.
    u.pop_back();
    return ControlPath{std::move(u)};
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& rep) {
    out << kComparisonHeader << '\n';
    for (const ScenarioResult& r : rep.results) {
        out << quoted_if_needed(r.name) << ',' << num(r.objective);
        for (int i = 0; i < 3; ++i) {
            const double t = i < int(r.switch_times.size()) ? r.switch_times[std::size_t(i)]
                                                            : std::nan("");
            out << ',' << (std::isfinite(t) ? num(t) : std::string("nan"));
        }
        out << ',' << num(r.terminal.s) << ',' << num(r.terminal.r) << ',' << num(r.terminal.e)
            << ',' << quoted_if_needed(r.status) << '\n';
    }
}

void write_comparison_csv(const std::string& path, const ComparisonReport& rep) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_comparison_csv(out, rep);
    if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace resopt
