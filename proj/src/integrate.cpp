#include "resopt/integrate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace resopt {

void ControlPath::validate() const {
    for (double u : values) {
        if (!std::isfinite(u) || u < -1e-12 || u > 1.0 + 1e-12) {
            throw std::domain_error("ControlPath: entry out of [0,1]: " + std::to_string(u));
        }
    }
}

State rk4_step(const State& x, double u, double h, const ModelParams& p) {
    auto axpy = [](const State& a, double c, const State& b) {
        return State{a.s + c * b.s, a.r + c * b.r, a.e + c * b.e};
    };
    const State k1 = state_rhs(x, u, p);
    const State k2 = state_rhs(axpy(x, 0.5 * h, k1), u, p);
    const State k3 = state_rhs(axpy(x, 0.5 * h, k2), u, p);
    const State k4 = state_rhs(axpy(x, h, k3), u, p);
    return State{x.s + h / 6.0 * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s),
                 x.r + h / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r),
                 x.e + h / 6.0 * (k1.e + 2.0 * k2.e + 2.0 * k3.e + k4.e)};
}

State crank_nicolson_step(const State& x, double u, double h, const ModelParams& p) {
    const Mat3 a = dynamics_matrix(u, p);
    const Mat3 lhs = identity_plus(a, -0.5 * h);
    const Mat3 rhs = identity_plus(a, 0.5 * h);
    const Vec3 b = rhs * Vec3{x.s, x.r, x.e};
    Vec3 y;
    if (!solve3(lhs, b, y)) {
        throw std::runtime_error("crank_nicolson_step: singular system at h = " +
                                 std::to_string(h));
    }
    return State{y[0], y[1], y[2]};
}

Trajectory integrate_forward(const ControlPath& u, const ModelParams& p, Scheme scheme) {
    if (int(u.values.size()) != p.n_steps) {
        throw std::invalid_argument("integrate_forward: control has " +
                                    std::to_string(u.values.size()) + " intervals, grid has " +
                                    std::to_string(p.n_steps));
    }
    u.validate();
    Trajectory traj;
    traj.grid = Grid::from_params(p);
    traj.controls = u.values;
    traj.states.resize(std::size_t(p.n_steps) + 1);
    traj.states[0] = State{p.s0, p.r0, p.e0};
    const double h = traj.grid.step();
    for (int k = 0; k < p.n_steps; ++k) {
        const State& xk = traj.states[std::size_t(k)];
        const double uk = u.values[std::size_t(k)];
        traj.states[std::size_t(k) + 1] = (scheme == Scheme::RK4)
                                              ? rk4_step(xk, uk, h, p)
                                              : crank_nicolson_step(xk, uk, h, p);
    }
    return traj;
}

void integrate_adjoint_backward(Trajectory& traj, const ModelParams& p, AdjointMode mode) {
    const int n = traj.grid.n;
    if (int(traj.states.size()) != n + 1 || int(traj.controls.size()) != n) {
        throw std::invalid_argument("integrate_adjoint_backward: incomplete trajectory");
    }
    const double h = traj.grid.step();
    traj.adjoints.assign(std::size_t(n) + 1, Adjoint{});
    traj.switching.assign(std::size_t(n) + 1, 0.0);

    // Backward Crank-Nicolson on dlam/dt = B(u)lam + d(u), stepping from
    // lam(T) = 0: (I + h/2 B) lam_k = (I - h/2 B) lam_{k+1} - h d, with
    // the interval's control on both sides.
    for (int k = n - 1; k >= 0; --k) {
        const double uk = traj.controls[std::size_t(k)];
        const Mat3 b = adjoint_matrix(uk, p, mode);
        const Vec3 d = adjoint_forcing(uk, p, mode);
        const Adjoint& nxt = traj.adjoints[std::size_t(k) + 1];
        const Vec3 lam1{nxt.lam_s, nxt.lam_r, nxt.lam_e};
        Vec3 rhs = identity_plus(b, -0.5 * h) * lam1;
        for (int i = 0; i < 3; ++i) rhs[i] -= h * d[i];
        const Mat3 lhs = identity_plus(b, 0.5 * h);
        Vec3 lam0;
        if (!solve3(lhs, rhs, lam0)) {
            throw std::runtime_error("integrate_adjoint_backward: singular system at h = " +
                                     std::to_string(h));
        }
        traj.adjoints[std::size_t(k)] = Adjoint{lam0[0], lam0[1], lam0[2]};
    }
    for (int k = 0; k <= n; ++k) {
        const double ht = switching_coefficient(traj.adjoints[std::size_t(k)], p);
        traj.switching[std::size_t(k)] = ht * traj.states[std::size_t(k)].r - p.c1;
    }
}

}  // namespace resopt
