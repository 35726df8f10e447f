#pragma once

// Shared helpers for the test binaries. Every oracle here recomputes
// its answer through a path independent of the code under test: plain
// Euler substeps, dense RK4, central differences, direct quadrature.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "resopt/direct.hpp"
#include "resopt/integrate.hpp"

namespace testutil {

using namespace resopt;

inline bool contains(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

inline ControlPath random_control(std::mt19937& rng, int n, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    ControlPath u;
    u.values.resize(static_cast<std::size_t>(n));
    for (double& v : u.values) v = dist(rng);
    return u;
}

// Many explicit Euler substeps across one step; deliberately naive.
inline State euler_oracle_step(State x, double u, double h, const ModelParams& p, int substeps) {
    const double hh = h / substeps;
    for (int i = 0; i < substeps; ++i) {
        const State d = state_rhs(x, u, p);
        x = State{x.s + hh * d.s, x.r + hh * d.r, x.e + hh * d.e};
    }
    return x;
}

// Dense RK4 states for a constant control, sampled at every fine node.
inline std::vector<State> rk4_dense(double u, const ModelParams& p, int n_fine) {
    const double h = p.horizon / n_fine;
    std::vector<State> xs(static_cast<std::size_t>(n_fine) + 1);
    xs[0] = State{p.s0, p.r0, p.e0};
    for (int k = 0; k < n_fine; ++k) {
        xs[std::size_t(k) + 1] = rk4_step(xs[std::size_t(k)], u, h, p);
    }
    return xs;
}

// Objective by dense RK4 simulation plus trapezoidal quadrature on the
// fine grid; used to certify the CN objective, never to define it.
inline double rk4_dense_objective(double u, const ModelParams& p, int n_fine) {
    const std::vector<State> xs = rk4_dense(u, p, n_fine);
    const double h = p.horizon / n_fine;
    double j = 0.0;
    for (int k = 0; k < n_fine; ++k) {
        const double wl = std::exp(-p.discount * (h * k));
        const double wr = std::exp(-p.discount * (h * (k + 1)));
        j += 0.5 * h *
             (wl * running_reward(xs[std::size_t(k)], u, p) +
              wr * running_reward(xs[std::size_t(k) + 1], u, p));
    }
    return j;
}

// Central finite differences of the discrete objective. Controls must
// sit at least eps inside [0,1] so the perturbed paths stay admissible.
inline std::vector<double> fd_gradient(const ControlPath& u, const ModelParams& p, double eps) {
    std::vector<double> g(u.values.size());
    for (std::size_t k = 0; k < u.values.size(); ++k) {
        ControlPath up = u;
        ControlPath dn = u;
        up.values[k] += eps;
        dn.values[k] -= eps;
        const double jp = objective(integrate_forward(up, p, Scheme::CrankNicolson), p);
        const double jm = objective(integrate_forward(dn, p, Scheme::CrankNicolson), p);
        g[k] = (jp - jm) / (2.0 * eps);
    }
    return g;
}

// Objective through the integration-by-parts identity: the discounted
// energy-revenue integral is replaced by the terminal-energy form, the
// remaining terms keep the per-interval trapezoid convention.
inline double ibp_objective(const Trajectory& traj, const ModelParams& p) {
    const int n = traj.grid.n;
    const double h = traj.grid.step();
    const double wT = std::exp(-p.discount * traj.grid.node(n));
    double j = p.p_e * (wT * traj.states[std::size_t(n)].e - traj.states[0].e);
    double energy_int = 0.0;
    double rest = 0.0;
    for (int k = 0; k < n; ++k) {
        const double wl = std::exp(-p.discount * traj.grid.node(k));
        const double wr = std::exp(-p.discount * traj.grid.node(k + 1));
        energy_int += 0.5 * h *
                      (wl * traj.states[std::size_t(k)].e + wr * traj.states[std::size_t(k) + 1].e);
        const double uk = traj.controls[std::size_t(k)];
        const double cost = p.c1 * uk + p.c2 * uk * uk;
        rest += 0.5 * h *
                (wl * (p.p_s * traj.states[std::size_t(k)].s - cost) +
                 wr * (p.p_s * traj.states[std::size_t(k) + 1].s - cost));
    }
    return j + p.discount * p.p_e * energy_int + rest;
}

// Locate the (upper, interior, lower, upper) subsequence of regimes and
// report the three boundary times plus the interior arc's mean control.
struct RegimeMatch {
    bool found = false;
    double t_upper_to_interior = 0.0;
    double t_interior_to_lower = 0.0;
    double t_lower_to_upper = 0.0;
    double interior_mean = 0.0;
};

inline RegimeMatch match_uilu(const std::vector<Regime>& regs) {
    RegimeMatch m;
    std::size_t i = 0;
    const auto seek = [&](RegimeKind kind) -> long {
        for (; i < regs.size(); ++i) {
            if (regs[i].kind == kind) return long(i++);
        }
        return -1;
    };
    const long iu = seek(RegimeKind::UpperBound);
    const long ii = seek(RegimeKind::Interior);
    const long il = seek(RegimeKind::LowerBound);
    const long iu2 = seek(RegimeKind::UpperBound);
    if (iu < 0 || ii < 0 || il < 0 || iu2 < 0) return m;
    m.found = true;
    m.t_upper_to_interior = regs[std::size_t(ii)].t_begin;
    m.t_interior_to_lower = regs[std::size_t(il)].t_begin;
    m.t_lower_to_upper = regs[std::size_t(iu2)].t_begin;
    m.interior_mean = regs[std::size_t(ii)].mean_control;
    return m;
}

}  // namespace testutil
