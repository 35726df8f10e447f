#include "resopt/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace resopt {

SweepConfig RunConfig::sweep_config() const {
    SweepConfig cfg;
    cfg.relaxation = relaxation;
    cfg.tol_control = tol;
    cfg.max_iters = fbsm_max_iters;
    cfg.adjoint_mode = adjoint_mode;
    return cfg;
}

DirectConfig RunConfig::direct_config() const {
    DirectConfig cfg;
    cfg.tol_grad = tol;
    cfg.max_iters = direct_max_iters;
    return cfg;
}

namespace {

struct Cursor {
    const std::string& name;
    int line;
};

[[noreturn]] void fail(const Cursor& at, const std::string& msg) {
    throw ConfigError(at.name + ":" + std::to_string(at.line) + ": " + msg);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& value, const Cursor& at, const std::string& key) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        fail(at, "value for '" + key + "' is not a number: '" + value + "'");
    }
    return v;
}

int parse_int(const std::string& value, const Cursor& at, const std::string& key) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0') {
        fail(at, "value for '" + key + "' is not an integer: '" + value + "'");
    }
    return int(v);
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& name) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    Cursor at{name, 0};

    while (std::getline(in, raw)) {
        ++at.line;
        const std::size_t hash = raw.find_first_of("#;");
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(at, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "model" && section != "econ" && section != "sim" &&
                section != "solver") {
                fail(at, "unknown section [" + section + "]");
            }
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(at, "expected 'key = value'");
        if (section.empty()) fail(at, "key before any section header");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(at, "empty key");
        if (value.empty()) fail(at, "empty value for '" + key + "'");
        seen.insert(section + "." + key);

        ModelParams& p = cfg.params;
        if (section == "model") {
            if (key == "alpha") p.alpha = parse_double(value, at, key);
            else if (key == "delta_S") p.delta_s = parse_double(value, at, key);
            else if (key == "rho") p.rho = parse_double(value, at, key);
            else if (key == "gamma") p.gamma = parse_double(value, at, key);
            else if (key == "beta") p.beta = parse_double(value, at, key);
            else if (key == "delta_E") p.delta_e = parse_double(value, at, key);
            else if (key == "theta") p.theta = parse_double(value, at, key);
            else fail(at, "unknown key '" + key + "' in [model]");
        } else if (section == "econ") {
            if (key == "p_E") p.p_e = parse_double(value, at, key);
            else if (key == "p_S") p.p_s = parse_double(value, at, key);
            else if (key == "c1") p.c1 = parse_double(value, at, key);
            else if (key == "c2") p.c2 = parse_double(value, at, key);
            else if (key == "discount") p.discount = parse_double(value, at, key);
            else fail(at, "unknown key '" + key + "' in [econ]");
        } else if (section == "sim") {
            if (key == "T") p.horizon = parse_double(value, at, key);
            else if (key == "N") p.n_steps = parse_int(value, at, key);
            else if (key == "S0") p.s0 = parse_double(value, at, key);
            else if (key == "R0") p.r0 = parse_double(value, at, key);
            else if (key == "E0") p.e0 = parse_double(value, at, key);
            else fail(at, "unknown key '" + key + "' in [sim]");
        } else {  // solver
            if (key == "method") {
                if (value == "fbsm") cfg.method = SolverChoice::Fbsm;
                else if (value == "direct") cfg.method = SolverChoice::Direct;
                else if (value == "both") cfg.method = SolverChoice::Both;
                else fail(at, "method must be fbsm, direct or both, got '" + value + "'");
            } else if (key == "adjoint_mode") {
                if (value == "paper") cfg.adjoint_mode = AdjointMode::PaperEq9;
                else if (value == "corrected") cfg.adjoint_mode = AdjointMode::CorrectedFromHamiltonian;
                else fail(at, "adjoint_mode must be paper or corrected, got '" + value + "'");
            } else if (key == "tol") {
                cfg.tol = parse_double(value, at, key);
            } else if (key == "max_iters") {
                const int iters = parse_int(value, at, key);
                cfg.fbsm_max_iters = iters;
                cfg.direct_max_iters = iters;
            } else if (key == "relaxation") {
                cfg.relaxation = parse_double(value, at, key);
            } else {
                fail(at, "unknown key '" + key + "' in [solver]");
            }
        }
    }

    static const char* kKnown[] = {
        "model.alpha", "model.delta_S", "model.rho", "model.gamma", "model.beta",
        "model.delta_E", "model.theta", "econ.p_E", "econ.p_S", "econ.c1",
        "econ.c2", "econ.discount", "sim.T", "sim.N", "sim.S0",
        "sim.R0", "sim.E0", "solver.method", "solver.adjoint_mode", "solver.tol",
        "solver.max_iters", "solver.relaxation"};
    for (const char* key : kKnown) {
        if (!seen.count(key)) {
            cfg.notices.push_back(std::string(key) + " not set; using default");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

}  // namespace resopt
