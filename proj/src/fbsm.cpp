#include "resopt/fbsm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace resopt {

void SweepConfig::validate() const {
    if (!(relaxation > 0.0) || relaxation > 1.0) {
        throw std::invalid_argument("SweepConfig: relaxation must lie in (0,1]");
    }
    if (!(tol_control > 0.0)) throw std::invalid_argument("SweepConfig: tol_control must be positive");
    if (max_iters < 1) throw std::invalid_argument("SweepConfig: max_iters must be at least 1");
    if (!initial_guess.values.empty()) initial_guess.validate();
}

namespace {

struct Run {
    RegimeKind kind;
    int start;  // first interval index
    int count;  // number of intervals
};

RegimeKind label(double u, double eps) {
    if (u <= eps) return RegimeKind::LowerBound;
    if (u >= 1.0 - eps) return RegimeKind::UpperBound;
    return RegimeKind::Interior;
}

void coalesce(std::vector<Run>& runs) {
    std::size_t w = 0;
    for (std::size_t i = 1; i < runs.size(); ++i) {
        if (runs[i].kind == runs[w].kind) {
            runs[w].count += runs[i].count;
        } else {
            runs[++w] = runs[i];
        }
    }
    runs.resize(w + 1);
}

}  // namespace

std::vector<Regime> classify_regimes(const Trajectory& traj, double eps) {
    if (traj.controls.empty()) {
        throw std::invalid_argument("classify_regimes: trajectory has no controls");
    }
    std::vector<Run> runs;
    for (int k = 0; k < int(traj.controls.size()); ++k) {
        const RegimeKind kind = label(traj.controls[std::size_t(k)], eps);
        if (!runs.empty() && runs.back().kind == kind) {
            ++runs.back().count;
        } else {
            runs.push_back(Run{kind, k, 1});
        }
    }
    // Absorb runs shorter than two grid steps into a neighbor until only
    // persistent arcs remain. A freshly widened neighbor can enable
    // another merge, hence the outer loop.
    bool changed = true;
    while (changed && runs.size() > 1) {
        changed = false;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            if (runs[i].count >= 2) continue;
            const std::size_t into = (i == 0) ? 1 : i - 1;
            if (into < i) {
                runs[into].count += runs[i].count;
            } else {
                runs[into].start = runs[i].start;
                runs[into].count += runs[i].count;
            }
            runs.erase(runs.begin() + long(i));
            coalesce(runs);
            changed = true;
            break;
        }
    }
    std::vector<Regime> out;
    out.reserve(runs.size());
    for (const Run& run : runs) {
        Regime reg;
        reg.t_begin = traj.grid.node(run.start);
        reg.t_end = traj.grid.node(run.start + run.count);
        reg.kind = run.kind;
        double sum = 0.0;
        for (int k = run.start; k < run.start + run.count; ++k) {
            sum += traj.controls[std::size_t(k)];
        }
        reg.mean_control = sum / run.count;
        out.push_back(reg);
    }
    return out;
}

FbsmResult solve_fbsm(const ModelParams& p, const SweepConfig& cfg) {
    p.validate();
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    ControlPath u = cfg.initial_guess.values.empty() ? ControlPath::constant(0.5, p.n_steps)
                                                     : cfg.initial_guess;
    if (int(u.values.size()) != p.n_steps) {
        throw std::invalid_argument("solve_fbsm: initial guess length does not match the grid");
    }

    FbsmResult result;
    std::vector<double> u_new(static_cast<std::size_t>(p.n_steps));
    double delta = 0.0;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        Trajectory traj = integrate_forward(u, p, Scheme::CrankNicolson);
        integrate_adjoint_backward(traj, p, cfg.adjoint_mode);
        for (int k = 0; k < p.n_steps; ++k) {
            const double ht = switching_coefficient(traj.adjoints[std::size_t(k)], p);
            u_new[std::size_t(k)] = optimal_control(ht, traj.states[std::size_t(k)].r, p);
        }
        delta = 0.0;
        for (int k = 0; k < p.n_steps; ++k) {
            delta = std::max(delta, std::abs(u_new[std::size_t(k)] - u.values[std::size_t(k)]));
        }
        // Fixed-point test before relaxing, so a control that already
        // maximizes its own Hamiltonian is accepted on this pass.
        if (delta <= cfg.tol_control) {
            result.trajectory = std::move(traj);
            result.report.converged = true;
            result.report.iterations = it;
            break;
        }
        for (int k = 0; k < p.n_steps; ++k) {
            u.values[std::size_t(k)] = (1.0 - cfg.relaxation) * u.values[std::size_t(k)] +
                                       cfg.relaxation * u_new[std::size_t(k)];
        }
        result.report.iterations = it;
    }

    if (!result.report.converged) {
        Trajectory traj = integrate_forward(u, p, Scheme::CrankNicolson);
        integrate_adjoint_backward(traj, p, cfg.adjoint_mode);
        result.trajectory = std::move(traj);
        result.report.message = "sweep did not converge: control delta " + std::to_string(delta) +
                                " after " + std::to_string(cfg.max_iters) + " iterations";
    }
    result.report.final_control_delta = delta;
    result.report.objective = objective(result.trajectory, p);
    result.report.regimes = classify_regimes(result.trajectory);
    result.report.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace resopt
