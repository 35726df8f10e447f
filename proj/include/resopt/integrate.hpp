#pragma once

#include <vector>

#include "resopt/model.hpp"
#include "resopt/pmp.hpp"

namespace resopt {

/// Uniform time grid with n intervals (n+1 nodes) on [t0, t1].
struct Grid {
    double t0 = 0.0;
    double t1 = 0.0;
    int n = 0;

    double step() const { return (t1 - t0) / n; }
    double node(int k) const { return t0 + k * step(); }

    static Grid from_params(const ModelParams& p) { return Grid{0.0, p.horizon, p.n_steps}; }
};

/// Piecewise-constant control, left-aligned: values[k] acts on
/// [t_k, t_{k+1}). Size equals the number of intervals.
struct ControlPath {
    std::vector<double> values;

    static ControlPath constant(double u, int n) { return ControlPath{std::vector<double>(std::size_t(n), u)}; }

    /// Throws std::domain_error if any entry is non-finite or outside
    /// [0,1] beyond 1e-12.
    void validate() const;
};

enum class Scheme { RK4, CrankNicolson };

/// States at every node, the control that produced them, and (after an
/// adjoint pass) costates and switching-function samples at the nodes.
struct Trajectory {
    Grid grid;
    std::vector<State> states;      // size n+1
    std::vector<double> controls;   // size n
    std::vector<Adjoint> adjoints;  // size n+1 when filled, else empty
    std::vector<double> switching;  // h_tilde*R - c1 at nodes, parallel to adjoints

    bool has_adjoints() const { return !adjoints.empty(); }
};

/// One classical RK4 step of the state dynamics under constant control.
State rk4_step(const State& x, double u, double h, const ModelParams& p);

/// One Crank-Nicolson step. The dynamics are linear in the state, so
/// the implicit relation (I - h/2 A(u)) x' = (I + h/2 A(u)) x is solved
/// exactly with one 3x3 linear solve; no fixed-point iteration.
/// Throws std::runtime_error naming the step size if the system matrix
/// is singular (only possible for absurdly large h).
State crank_nicolson_step(const State& x, double u, double h, const ModelParams& p);

/// Integrate the state forward from (s0, r0, e0) over the grid implied
/// by p. Throws std::invalid_argument if the control length differs
/// from p.n_steps.
Trajectory integrate_forward(const ControlPath& u, const ModelParams& p, Scheme scheme);

/// Integrate the current-value costates backward along a computed
/// trajectory (terminal condition lambda(T) = 0), filling
/// traj.adjoints and traj.switching. Crank-Nicolson in reverse, again
/// via exact 3x3 solves since the costate dynamics are affine.
void integrate_adjoint_backward(Trajectory& traj, const ModelParams& p, AdjointMode mode);

}  // namespace resopt
