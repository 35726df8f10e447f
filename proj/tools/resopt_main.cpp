#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "resopt/config.hpp"
#include "resopt/csv.hpp"

using namespace resopt;

namespace {

// Exit contract: 0 ok, 2 config error, 3 input error, 4 solver
// non-convergence. InputError marks problems with user-supplied data
// (controls, paths) as opposed to configuration.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInput = 3;
constexpr int kExitNoConverge = 4;

std::string num(double v, const char* spec = "%.12g") {
    char buf[40];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

RunConfig load_or_default(const std::string& path) {
    if (path.empty()) return RunConfig{};
    RunConfig cfg = load_config(path);
    for (const std::string& note : cfg.notices) {
        std::cerr << "notice: " << note << "\n";
    }
    cfg.params.validate();
    return cfg;
}

const char* kind_name(RegimeKind k) {
    switch (k) {
        case RegimeKind::LowerBound: return "lower";
        case RegimeKind::Interior: return "interior";
        case RegimeKind::UpperBound: return "upper";
    }
    return "?";
}

void print_summary(const SolveReport& rep, const Trajectory& traj) {
    std::cout << "converged: " << (rep.converged ? "yes" : "no") << "\n";
    std::cout << "iterations: " << rep.iterations << "\n";
    std::cout << "objective J = " << num(rep.objective) << "\n";
    std::cout << "regimes:\n";
    for (const Regime& reg : rep.regimes) {
        std::printf("  %-8s  [%9.4f, %9.4f]  mean u = %.4f\n", kind_name(reg.kind), reg.t_begin,
                    reg.t_end, reg.mean_control);
    }
    const State& xt = traj.states.back();
    std::cout << "terminal state: S = " << num(xt.s) << ", R = " << num(xt.r)
              << ", E = " << num(xt.e) << "\n";
    if (!rep.message.empty()) std::cout << "note: " << rep.message << "\n";
}

std::string sanitize(const std::string& name) {
    std::string out;
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
        out += ok ? c : '_';
    }
    return out.empty() ? std::string("scenario") : out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Scenario files are sectioned key/value text: each section names one
// scenario, keys override the base parameters. Example:
//   [high-energy-price]
//   p_E = 2.0
//   method = both
std::vector<Scenario> parse_scenario_file(const std::string& path, const ModelParams& base) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open scenario file: " + path);

    static const std::map<std::string, double ModelParams::*> kNumKeys = {
        {"alpha", &ModelParams::alpha},     {"delta_S", &ModelParams::delta_s},
        {"rho", &ModelParams::rho},         {"gamma", &ModelParams::gamma},
        {"beta", &ModelParams::beta},       {"delta_E", &ModelParams::delta_e},
        {"theta", &ModelParams::theta},     {"p_E", &ModelParams::p_e},
        {"p_S", &ModelParams::p_s},         {"c1", &ModelParams::c1},
        {"c2", &ModelParams::c2},           {"discount", &ModelParams::discount},
        {"T", &ModelParams::horizon},       {"S0", &ModelParams::s0},
        {"R0", &ModelParams::r0},           {"E0", &ModelParams::e0}};

    std::vector<Scenario> list;
    std::set<std::string> names;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw ConfigError(path + ":" + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find_first_of("#;");
        const std::string stripped = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (stripped.empty()) continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']') fail("unterminated section header");
            const std::string name = trim(stripped.substr(1, stripped.size() - 2));
            if (name.empty()) fail("empty scenario name");
            if (!names.insert(name).second) fail("duplicate scenario name '" + name + "'");
            Scenario sc;
            sc.name = name;
            sc.params = base;
            list.push_back(sc);
            continue;
        }
        if (list.empty()) fail("key before any scenario section");
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        Scenario& sc = list.back();
        if (key == "method") {
            if (value == "fbsm") sc.solver = SolverChoice::Fbsm;
            else if (value == "direct") sc.solver = SolverChoice::Direct;
            else if (value == "both") sc.solver = SolverChoice::Both;
            else fail("method must be fbsm, direct or both");
        } else if (key == "adjoint_mode") {
            if (value == "paper") sc.adjoint_mode = AdjointMode::PaperEq9;
            else if (value == "corrected") sc.adjoint_mode = AdjointMode::CorrectedFromHamiltonian;
            else fail("adjoint_mode must be paper or corrected");
        } else if (key == "N") {
            try {
                sc.params.n_steps = std::stoi(value);
            } catch (const std::exception&) {
                fail("value for 'N' is not an integer");
            }
        } else {
            const auto it = kNumKeys.find(key);
            if (it == kNumKeys.end()) fail("unknown key '" + key + "'");
            try {
                sc.params.*(it->second) = std::stod(value);
            } catch (const std::exception&) {
                fail("value for '" + key + "' is not a number");
            }
        }
    }
    if (list.empty()) throw ConfigError(path + ": no scenarios defined");
    return list;
}

struct SimulateArgs {
    std::string config;
    std::string control_csv;
    double u = 0.5;
    std::string out = "trajectory.csv";
};

int cmd_simulate(const SimulateArgs& args, bool u_given) {
    const RunConfig cfg = load_or_default(args.config);
    const ModelParams& p = cfg.params;

    ControlPath u;
    if (!args.control_csv.empty()) {
        if (u_given) throw InputError("--u and --control-csv are mutually exclusive");
        try {
            u = read_control_csv(args.control_csv);
        } catch (const std::exception& ex) {
            throw InputError(ex.what());
        }
        if (int(u.values.size()) != p.n_steps) {
            throw InputError("control file has " + std::to_string(u.values.size()) +
                             " intervals, grid needs " + std::to_string(p.n_steps));
        }
    } else {
        u = ControlPath::constant(args.u, p.n_steps);
    }
    u.validate();  // inadmissible control exits 3 via domain_error

    const Trajectory traj = integrate_forward(u, p, Scheme::CrankNicolson);
    const double j = objective(traj, p);
    try {
        write_trajectory_csv(args.out, traj, p);
    } catch (const std::exception& ex) {
        throw InputError(ex.what());
    }
    std::cout << "J = " << num(j) << "\n";
    const State& xt = traj.states.back();
    std::cout << "terminal state: S = " << num(xt.s) << ", R = " << num(xt.r)
              << ", E = " << num(xt.e) << "\n";
    std::cout << "wrote " << args.out << "\n";
    return kExitOk;
}

struct SolveArgs {
    std::string config;
    SolverChoice method = SolverChoice::Fbsm;
    AdjointMode adjoint_mode = AdjointMode::CorrectedFromHamiltonian;
    std::string out = "trajectory.csv";
};

int cmd_solve(const SolveArgs& args, bool method_given, bool mode_given) {
    RunConfig cfg = load_or_default(args.config);
    if (method_given) cfg.method = args.method;
    if (mode_given) cfg.adjoint_mode = args.adjoint_mode;
    const ModelParams& p = cfg.params;

    bool all_converged = true;
    Trajectory traj;
    if (cfg.method == SolverChoice::Fbsm) {
        std::cout << "method: fbsm\n";
        FbsmResult r = solve_fbsm(p, cfg.sweep_config());
        all_converged = r.report.converged;
        print_summary(r.report, r.trajectory);
        traj = std::move(r.trajectory);
    } else {
        DirectResult d = solve_direct(p, cfg.direct_config());
        all_converged = d.report.converged;
        if (cfg.adjoint_mode == AdjointMode::PaperEq9) {
            integrate_adjoint_backward(d.trajectory, p, AdjointMode::PaperEq9);
        }
        if (cfg.method == SolverChoice::Both) {
            FbsmResult f = solve_fbsm(p, cfg.sweep_config());
            all_converged = all_converged && f.report.converged;
            const double gap = std::abs(f.report.objective - d.report.objective);
            std::cout << "method: both\n";
            std::cout << "J_direct = " << num(d.report.objective) << "\n";
            std::cout << "J_fbsm = " << num(f.report.objective) << "\n";
            std::cout << "|J_fbsm - J_direct| = " << num(gap) << "\n";
            std::cout << "relative gap = "
                      << num(gap / std::max(std::abs(d.report.objective), 1e-300)) << "\n";
        } else {
            std::cout << "method: direct\n";
        }
        print_summary(d.report, d.trajectory);
        traj = std::move(d.trajectory);
    }
    try {
        write_trajectory_csv(args.out, traj, p);
    } catch (const std::exception& ex) {
        throw InputError(ex.what());
    }
    std::cout << "wrote " << args.out << "\n";
    return all_converged ? kExitOk : kExitNoConverge;
}

struct ScenariosArgs {
    std::string config;
    std::string set = "builtin";
    std::string out = ".";
};

int cmd_scenarios(const ScenariosArgs& args) {
    const RunConfig cfg = load_or_default(args.config);
    const std::vector<Scenario> list = (args.set == "builtin")
                                           ? builtin_scenarios(cfg.params)
                                           : parse_scenario_file(args.set, cfg.params);
    const ComparisonReport rep = run_scenarios(list);

    std::error_code ec;
    std::filesystem::create_directories(args.out, ec);
    if (ec) throw InputError("cannot create output directory " + args.out + ": " + ec.message());

    const std::filesystem::path dir(args.out);
    try {
        write_comparison_csv((dir / "comparison.csv").string(), rep);
        for (std::size_t i = 0; i < rep.results.size(); ++i) {
            const ScenarioResult& r = rep.results[i];
            if (r.trajectory.states.empty()) continue;
            write_trajectory_csv((dir / (sanitize(r.name) + ".csv")).string(), r.trajectory,
                                 list[i].params);
        }
    } catch (const std::exception& ex) {
        throw InputError(ex.what());
    }

    bool any_ok = false;
    for (const ScenarioResult& r : rep.results) {
        std::cout << r.name << ": J = " << num(r.objective) << ", status = " << r.status << "\n";
        any_ok = any_ok || r.ok;
    }
    std::cout << "wrote " << (dir / "comparison.csv").string() << "\n";
    return any_ok ? kExitOk : kExitNoConverge;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"resopt: optimal crop-residue allocation between soil return and bioenergy"};
    app.require_subcommand(1);

    const std::map<std::string, SolverChoice> kMethods{
        {"fbsm", SolverChoice::Fbsm}, {"direct", SolverChoice::Direct}, {"both", SolverChoice::Both}};
    const std::map<std::string, AdjointMode> kModes{
        {"paper", AdjointMode::PaperEq9}, {"corrected", AdjointMode::CorrectedFromHamiltonian}};

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "integrate the state under a fixed control");
    simulate->add_option("--config", sim.config, "configuration file");
    CLI::Option* opt_u = simulate->add_option("--u", sim.u, "constant control value (default 0.5)");
    simulate->add_option("--control-csv", sim.control_csv,
                         "take the control from a trajectory CSV's u column");
    simulate->add_option("--out", sim.out, "output trajectory CSV (default trajectory.csv)");

    SolveArgs sol;
    CLI::App* solve = app.add_subcommand("solve", "solve for the optimal control");
    solve->add_option("--config", sol.config, "configuration file");
    CLI::Option* opt_method =
        solve->add_option("--method", sol.method, "fbsm, direct or both")
            ->transform(CLI::CheckedTransformer(kMethods, CLI::ignore_case));
    CLI::Option* opt_mode =
        solve->add_option("--adjoint-mode", sol.adjoint_mode, "paper or corrected")
            ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
    solve->add_option("--out", sol.out, "output trajectory CSV (default trajectory.csv)");

    ScenariosArgs sce;
    CLI::App* scenarios = app.add_subcommand("scenarios", "run a batch of scenario studies");
    scenarios->add_option("--config", sce.config, "configuration file giving the base parameters");
    scenarios->add_option("--set", sce.set, "'builtin' or a scenario file path");
    scenarios->add_option("--out", sce.out, "output directory (default .)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim, opt_u->count() > 0);
        if (solve->parsed()) return cmd_solve(sol, opt_method->count() > 0, opt_mode->count() > 0);
        return cmd_scenarios(sce);
    } catch (const ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kExitConfig;
    } catch (const InputError& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kExitInput;
    } catch (const std::domain_error& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitInput;
    }
}
