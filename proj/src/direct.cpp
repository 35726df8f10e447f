#include "resopt/direct.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace resopt {

void ArmijoParams::validate() const {
    if (!(initial_step > 0.0)) throw std::invalid_argument("ArmijoParams: initial_step must be positive");
    if (!(shrink > 0.0) || shrink >= 1.0) throw std::invalid_argument("ArmijoParams: shrink must lie in (0,1)");
    if (!(c > 0.0) || c >= 1.0) throw std::invalid_argument("ArmijoParams: c must lie in (0,1)");
}

void DirectConfig::validate() const {
    if (max_iters < 1) throw std::invalid_argument("DirectConfig: max_iters must be at least 1");
    if (!(tol_grad > 0.0)) throw std::invalid_argument("DirectConfig: tol_grad must be positive");
    armijo.validate();
    if (!initial_guess.values.empty()) initial_guess.validate();
}

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

Vec3 reward_state_gradient(double u, const ModelParams& p) {
    return Vec3{p.p_s, p.p_e * p.beta * u, -p.p_e * p.delta_e};
}

double reward_control_derivative(const State& x, double u, const ModelParams& p) {
    return p.p_e * p.beta * x.r - p.c1 - 2.0 * p.c2 * u;
}

}  // namespace

GradientReport objective_and_gradient(const ControlPath& u, const ModelParams& p) {
    if (int(u.values.size()) != p.n_steps) {
        throw std::invalid_argument("objective_and_gradient: control length does not match the grid");
    }
    u.validate();
    const Trajectory traj = integrate_forward(u, p, Scheme::CrankNicolson);
    const int n = p.n_steps;
    const double h = traj.grid.step();

    GradientReport rep;
    rep.objective = objective(traj, p);
    rep.gradient.assign(std::size_t(n), 0.0);

    std::vector<double> w(std::size_t(n) + 1);
    for (int k = 0; k <= n; ++k) w[std::size_t(k)] = std::exp(-p.discount * traj.grid.node(k));

    // Reverse pass through the Crank-Nicolson recursion
    //   M(u_k) x_{k+1} = P(u_k) x_k,  M = I - h/2 A,  P = I + h/2 A,
    // carrying nu_{k+1} = M(u_k)^{-T} dJ/dx_{k+1}. Differentiating the
    // step in u gives dx_{k+1}/du_k = M^{-1} (h/2) A'(u)(x_k + x_{k+1})
    // with A'(u) x = (-alpha x_r, 0, beta x_r), so each interval's
    // gradient is the quadrature's own u-derivative plus that path term.
    Vec3 nu_next{};  // nu_{k+2}
    for (int k = n - 1; k >= 0; --k) {
        const double uk = u.values[std::size_t(k)];
        Vec3 rhs = reward_state_gradient(uk, p);
        for (double& v : rhs) v *= 0.5 * h * w[std::size_t(k) + 1];
        if (k < n - 1) {
            const double un = u.values[std::size_t(k) + 1];
            const Vec3 g2 = reward_state_gradient(un, p);
            for (int i = 0; i < 3; ++i) rhs[i] += 0.5 * h * w[std::size_t(k) + 1] * g2[i];
            const Mat3 pt = identity_plus(dynamics_matrix(un, p), 0.5 * h).transposed();
            const Vec3 carry = pt * nu_next;
            for (int i = 0; i < 3; ++i) rhs[i] += carry[i];
        }
        const Mat3 mt = identity_plus(dynamics_matrix(uk, p), -0.5 * h).transposed();
        Vec3 nu;
        if (!solve3(mt, rhs, nu)) {
            throw std::runtime_error("objective_and_gradient: singular adjoint system");
        }
        const double rk = traj.states[std::size_t(k)].r;
        const double rk1 = traj.states[std::size_t(k) + 1].r;
        const double quad = 0.5 * h *
                            (w[std::size_t(k)] * reward_control_derivative(traj.states[std::size_t(k)], uk, p) +
                             w[std::size_t(k) + 1] * reward_control_derivative(traj.states[std::size_t(k) + 1], uk, p));
        const double path = 0.5 * h * (rk + rk1) * (-p.alpha * nu[0] + p.beta * nu[2]);
        rep.gradient[std::size_t(k)] = quad + path;
        nu_next = nu;
    }

    double pg = 0.0;
    for (int k = 0; k < n; ++k) {
        const double moved = clamp01(u.values[std::size_t(k)] + rep.gradient[std::size_t(k)]);
        pg = std::max(pg, std::abs(moved - u.values[std::size_t(k)]));
    }
    rep.projected_gradient_norm = pg;
    return rep;
}

DirectResult solve_direct(const ModelParams& p, const DirectConfig& cfg) {
    p.validate();
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    ControlPath u = cfg.initial_guess.values.empty() ? ControlPath::constant(0.5, p.n_steps)
                                                     : cfg.initial_guess;
    if (int(u.values.size()) != p.n_steps) {
        throw std::invalid_argument("solve_direct: initial guess length does not match the grid");
    }
    const int n = p.n_steps;

    DirectResult result;
    GradientReport rep = objective_and_gradient(u, p);
    double bb_step = cfg.armijo.initial_step;
    ControlPath trial = u;

    for (int it = 1; it <= cfg.max_iters; ++it) {
        result.report.iterations = it;
        if (rep.projected_gradient_norm <= cfg.tol_grad) {
            result.report.converged = true;
            break;
        }
        // Ascent along the projection arc u(t) = clamp(u + t g) with a
        // monotone Armijo test against the realized displacement.
        double t = bb_step;
        bool accepted = false;
        double j_trial = rep.objective;
        while (t >= 1e-14) {
            double dirdot = 0.0;
            for (int k = 0; k < n; ++k) {
                trial.values[std::size_t(k)] =
                    clamp01(u.values[std::size_t(k)] + t * rep.gradient[std::size_t(k)]);
                dirdot += rep.gradient[std::size_t(k)] *
                          (trial.values[std::size_t(k)] - u.values[std::size_t(k)]);
            }
            const Trajectory tr = integrate_forward(trial, p, Scheme::CrankNicolson);
            j_trial = objective(tr, p);
            if (j_trial >= rep.objective + cfg.armijo.c * dirdot) {
                accepted = true;
                break;
            }
            t *= cfg.armijo.shrink;
        }
        if (!accepted) {
            result.report.message = "line search stalled at iteration " + std::to_string(it);
            break;
        }
        const std::vector<double> g_old = rep.gradient;
        const std::vector<double> u_old = u.values;
        u = trial;
        rep = objective_and_gradient(u, p);
        // Barzilai-Borwein warm start for the next search, safeguarded
        // into a broad bracket; y uses the ascent sign convention.
        double ss = 0.0, sy = 0.0;
        for (int k = 0; k < n; ++k) {
            const double s = u.values[std::size_t(k)] - u_old[std::size_t(k)];
            const double y = g_old[std::size_t(k)] - rep.gradient[std::size_t(k)];
            ss += s * s;
            sy += s * y;
        }
        bb_step = (sy > 0.0) ? std::min(1e7, std::max(1e-3, ss / sy)) : cfg.armijo.initial_step;
    }

    if (!result.report.converged && result.report.message.empty()) {
        result.report.message = "projected gradient norm " +
                                std::to_string(rep.projected_gradient_norm) + " after " +
                                std::to_string(cfg.max_iters) + " iterations";
    }

    Trajectory traj = integrate_forward(u, p, Scheme::CrankNicolson);
    integrate_adjoint_backward(traj, p, AdjointMode::CorrectedFromHamiltonian);
    result.report.objective = objective(traj, p);
    result.report.final_control_delta = rep.projected_gradient_norm;
    result.report.regimes = classify_regimes(traj);
    result.report.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.trajectory = std::move(traj);
    result.control = std::move(u);
    return result;
}

std::pair<ControlPath, double> brute_force(const ModelParams& p, int n_segments, int levels) {
    p.validate();
    if (n_segments < 1) throw std::invalid_argument("brute_force: n_segments must be at least 1");
    if (levels < 2) throw std::invalid_argument("brute_force: levels must be at least 2");
    if (std::pow(double(levels), double(n_segments)) > 1e7) {
        throw std::invalid_argument("brute_force: levels^n_segments exceeds 1e7");
    }

    const int n = p.n_steps;
    const Grid grid = Grid::from_params(p);
    const double h = grid.step();

    // One-step transition matrix per level: T = M^{-1} P, built once by
    // solving for each column.
    std::vector<Mat3> trans(static_cast<std::size_t>(levels));
    std::vector<double> level_u(static_cast<std::size_t>(levels));
    for (int l = 0; l < levels; ++l) {
        const double ul = double(l) / (levels - 1);
        level_u[std::size_t(l)] = ul;
        const Mat3 a = dynamics_matrix(ul, p);
        const Mat3 m = identity_plus(a, -0.5 * h);
        const Mat3 pm = identity_plus(a, 0.5 * h);
        Mat3 t;
        for (int col = 0; col < 3; ++col) {
            Vec3 rhs{pm(0, col), pm(1, col), pm(2, col)};
            Vec3 x;
            if (!solve3(m, rhs, x)) {
                throw std::runtime_error("brute_force: singular step matrix");
            }
            for (int row = 0; row < 3; ++row) t(row, col) = x[row];
        }
        trans[std::size_t(l)] = t;
    }

    std::vector<double> w(std::size_t(n) + 1);
    for (int k = 0; k <= n; ++k) w[std::size_t(k)] = std::exp(-p.discount * grid.node(k));
    std::vector<int> seg(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) seg[std::size_t(k)] = int(std::int64_t(k) * n_segments / n);

    auto reward = [&p](const Vec3& x, double u) {
        return p.p_e * (p.beta * u * x[1] - p.delta_e * x[2]) + p.p_s * x[0] -
               (p.c1 * u + p.c2 * u * u);
    };

    const std::int64_t total = [&] {
        std::int64_t t = 1;
        for (int s = 0; s < n_segments; ++s) t *= levels;
        return t;
    }();

    std::vector<int> digits(static_cast<std::size_t>(n_segments));
    std::vector<int> best_digits;
    double best_j = -std::numeric_limits<double>::infinity();
    for (std::int64_t combo = 0; combo < total; ++combo) {
        std::int64_t c = combo;
        for (int s = 0; s < n_segments; ++s) {
            digits[std::size_t(s)] = int(c % levels);
            c /= levels;
        }
        Vec3 x{p.s0, p.r0, p.e0};
        double j = 0.0;
        for (int k = 0; k < n; ++k) {
            const int l = digits[std::size_t(seg[std::size_t(k)])];
            const double uk = level_u[std::size_t(l)];
            const double ll = reward(x, uk);
            const Vec3 x1 = trans[std::size_t(l)] * x;
            j += 0.5 * h * (w[std::size_t(k)] * ll + w[std::size_t(k) + 1] * reward(x1, uk));
            x = x1;
        }
        if (j > best_j) {
            best_j = j;
            best_digits = digits;
        }
    }

    ControlPath best;
    best.values.resize(std::size_t(n));
    for (int k = 0; k < n; ++k) {
        best.values[std::size_t(k)] = level_u[std::size_t(best_digits[std::size_t(seg[std::size_t(k)])])];
    }
    return {best, best_j};
}

}  // namespace resopt
