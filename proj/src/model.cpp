#include "resopt/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "resopt/integrate.hpp"

namespace resopt {

namespace {

constexpr double kControlSlack = 1e-12;

void check_control(double u) {
    if (!std::isfinite(u) || u < -kControlSlack || u > 1.0 + kControlSlack) {
        throw std::domain_error("control out of [0,1]: u = " + std::to_string(u));
    }
}

void check_state(const State& x) {
    if (!std::isfinite(x.s) || !std::isfinite(x.r) || !std::isfinite(x.e)) {
        throw std::domain_error("non-finite state");
    }
}

[[noreturn]] void bad_param(const char* name) {
    throw std::invalid_argument(std::string("ModelParams: invalid ") + name);
}

}  // namespace

void ModelParams::validate() const {
    auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
    auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
    if (!pos(alpha)) bad_param("alpha");
    if (!pos(delta_s)) bad_param("delta_S");
    if (!pos(rho)) bad_param("rho");
    if (!pos(gamma)) bad_param("gamma");
    if (!pos(beta)) bad_param("beta");
    if (!pos(delta_e)) bad_param("delta_E");
    if (!nonneg(theta)) bad_param("theta");
    if (!nonneg(discount)) bad_param("discount");
    if (!nonneg(p_e)) bad_param("p_E");
    if (!nonneg(p_s)) bad_param("p_S");
    if (!nonneg(c1)) bad_param("c1");
    if (!pos(c2)) bad_param("c2");
    if (!pos(horizon)) bad_param("T");
    if (n_steps < 2) bad_param("N");
    if (!pos(s0)) bad_param("S0");
    if (!pos(r0)) bad_param("R0");
    if (!nonneg(e0)) bad_param("E0");
}

State state_rhs(const State& x, double u, const ModelParams& p) {
    check_control(u);
    check_state(x);
    const ProductivityFn eta = p.productivity();
    State d;
    d.s = p.alpha * (1.0 - u) * x.r - p.delta_s * x.s + p.theta * x.e;
    d.r = eta(x.s) - p.gamma * x.r;
    d.e = p.beta * u * x.r - p.delta_e * x.e;
    return d;
}

Mat3 dynamics_matrix(double u, const ModelParams& p) {
    check_control(u);
    Mat3 a;
    a(0, 0) = -p.delta_s;
    a(0, 1) = p.alpha * (1.0 - u);
    a(0, 2) = p.theta;
    a(1, 0) = p.rho;
    a(1, 1) = -p.gamma;
    a(1, 2) = 0.0;
    a(2, 0) = 0.0;
    a(2, 1) = p.beta * u;
    a(2, 2) = -p.delta_e;
    return a;
}

double running_reward(const State& x, double u, const ModelParams& p) {
    check_control(u);
    check_state(x);
    const double de = p.beta * u * x.r - p.delta_e * x.e;
    return p.p_e * de + p.p_s * x.s - (p.c1 * u + p.c2 * u * u);
}

double objective(const Trajectory& traj, const ModelParams& p) {
    const int n = traj.grid.n;
    if (n != p.n_steps || int(traj.states.size()) != n + 1 || int(traj.controls.size()) != n) {
        throw std::invalid_argument("objective: trajectory does not match the parameter grid");
    }
    const double h = traj.grid.step();
    double j = 0.0;
    for (int k = 0; k < n; ++k) {
        const double u = traj.controls[std::size_t(k)];
        const double wl = std::exp(-p.discount * traj.grid.node(k));
        const double wr = std::exp(-p.discount * traj.grid.node(k + 1));
        const double ll = running_reward(traj.states[std::size_t(k)], u, p);
        const double lr = running_reward(traj.states[std::size_t(k) + 1], u, p);
        j += 0.5 * h * (wl * ll + wr * lr);
    }
    return j;
}

std::vector<double> node_rewards(const Trajectory& traj, const ModelParams& p) {
    const int n = traj.grid.n;
    if (int(traj.states.size()) != n + 1 || int(traj.controls.size()) != n) {
        throw std::invalid_argument("node_rewards: inconsistent trajectory");
    }
    std::vector<double> out(std::size_t(n) + 1);
    for (int k = 0; k <= n; ++k) {
        const double u = traj.controls[std::size_t(k < n ? k : n - 1)];
        out[std::size_t(k)] = running_reward(traj.states[std::size_t(k)], u, p);
    }
    return out;
}

}  // namespace resopt
