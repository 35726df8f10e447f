#include "resopt/scenarios.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace resopt {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<double> transition_times(const std::vector<Regime>& regimes) {
    std::vector<double> out(3, kNan);
    std::size_t i = 0;
    for (std::size_t r = 0; r + 1 < regimes.size() && i < 3; ++r) {
        out[i++] = regimes[r].t_end;
    }
    return out;
}

ScenarioResult run_one(const Scenario& sc, const ControlPath* warm) {
    ScenarioResult res;
    res.name = sc.name;
    res.switch_times.assign(3, kNan);
    try {
        sc.params.validate();
        const bool warm_usable = warm && int(warm->values.size()) == sc.params.n_steps;
        SolveReport primary;
        Trajectory traj;
        std::optional<double> j_fbsm;
        if (sc.solver == SolverChoice::Fbsm) {
            SweepConfig cfg;
            cfg.adjoint_mode = sc.adjoint_mode;
            if (warm_usable) cfg.initial_guess = *warm;
            FbsmResult r = solve_fbsm(sc.params, cfg);
            primary = std::move(r.report);
            traj = std::move(r.trajectory);
        } else {
            DirectConfig cfg;
            if (warm_usable) cfg.initial_guess = *warm;
            DirectResult r = solve_direct(sc.params, cfg);
            primary = std::move(r.report);
            traj = std::move(r.trajectory);
            if (sc.solver == SolverChoice::Both) {
                SweepConfig fcfg;
                fcfg.adjoint_mode = sc.adjoint_mode;
                if (warm_usable) fcfg.initial_guess = *warm;
                FbsmResult f = solve_fbsm(sc.params, fcfg);
                j_fbsm = f.report.objective;
            }
        }
        res.objective = primary.objective;
        res.switch_times = transition_times(primary.regimes);
        res.terminal = traj.states.back();
        res.ok = primary.converged;
        res.status = primary.converged ? "ok" : "no_converge";
        if (j_fbsm) {
            res.objective_fbsm = j_fbsm;
            res.objective_gap =
                std::abs(res.objective - *j_fbsm) / std::max(std::abs(res.objective), 1.0);
        }
        res.report = std::move(primary);
        res.trajectory = std::move(traj);
    } catch (const std::exception& ex) {
        res.ok = false;
        res.status = std::string("error: ") + ex.what();
        res.objective = kNan;
        res.terminal = State{kNan, kNan, kNan};
    }
    return res;
}

}  // namespace

std::vector<Scenario> builtin_scenarios(const ModelParams& base) {
    std::vector<Scenario> list;
    {
        Scenario sc;
        sc.name = "baseline";
        sc.params = base;
        list.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "no-reinvest";
        sc.params = base;
        sc.params.theta = 0.0;
        list.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "short-horizon";
        sc.params = base;
        sc.params.horizon = 15.0;
        list.push_back(sc);
    }
    {
        Scenario sc;
        sc.name = "long-horizon";
        sc.params = base;
        sc.params.horizon = 30.0;
        list.push_back(sc);
    }
    return list;
}

ComparisonReport run_scenarios(const std::vector<Scenario>& list) {
    ComparisonReport rep;
    rep.results.reserve(list.size());
    for (const Scenario& sc : list) {
        rep.results.push_back(run_one(sc, nullptr));
    }
    return rep;
}

ComparisonReport sweep(const Scenario& base, SweepParameter which,
                       const std::vector<double>& values) {
    ComparisonReport rep;
    ControlPath warm;
    for (double v : values) {
        Scenario sc = base;
        switch (which) {
            case SweepParameter::Theta:
                sc.name = "theta=" + std::to_string(v);
                sc.params.theta = v;
                break;
            case SweepParameter::Horizon:
                sc.name = "T=" + std::to_string(v);
                sc.params.horizon = v;
                break;
            case SweepParameter::PriceEnergy:
                sc.name = "p_E=" + std::to_string(v);
                sc.params.p_e = v;
                break;
            case SweepParameter::LinearCost:
                sc.name = "c1=" + std::to_string(v);
                sc.params.c1 = v;
                break;
        }
        // Continuation: each point starts from its neighbor's optimum.
        ScenarioResult res = run_one(sc, warm.values.empty() ? nullptr : &warm);
        if (!res.trajectory.controls.empty()) warm.values = res.trajectory.controls;
        rep.results.push_back(std::move(res));
    }
    return rep;
}

}  // namespace resopt
