#pragma once

#include <utility>

#include "resopt/fbsm.hpp"

namespace resopt {

/// Backtracking line-search parameters for the projected gradient
/// ascent. Steps shrink geometrically until the Armijo condition along
/// the projection arc holds.
struct ArmijoParams {
    double initial_step = 1.0;
    double shrink = 0.5;
    double c = 1e-4;

    void validate() const;
};

struct DirectConfig {
    int max_iters = 5000;
    double tol_grad = 1e-6;  // sup-norm of the projected gradient
    ArmijoParams armijo;
    ControlPath initial_guess;  // empty means u = 0.5 everywhere

    void validate() const;
};

/// Objective value plus its exact discrete gradient with respect to the
/// per-interval controls, obtained by reverse-mode differentiation
/// through the Crank-Nicolson steps and the trapezoidal quadrature.
struct GradientReport {
    std::vector<double> gradient;  // dJ/du_k, size n
    double projected_gradient_norm = 0.0;  // sup-norm of P(u+g) - u
    double objective = 0.0;
};

GradientReport objective_and_gradient(const ControlPath& u, const ModelParams& p);

struct DirectResult {
    Trajectory trajectory;
    SolveReport report;
    ControlPath control;
};

/// Projected gradient ascent with Barzilai-Borwein step warm start and
/// monotone Armijo backtracking along the projection arc. On return the
/// trajectory carries corrected-mode costates and switching samples so
/// downstream regime and switching analysis works the same as for the
/// sweep solver.
DirectResult solve_direct(const ModelParams& p, const DirectConfig& cfg);

/// Exhaustive search over piecewise-constant controls with n_segments
/// equal segments and the given number of evenly spaced levels in
/// [0,1]. Returns the best control and its objective. Throws
/// std::invalid_argument when levels^n_segments exceeds 1e7. Intended
/// as a certification oracle for coarse problems, not a solver.
std::pair<ControlPath, double> brute_force(const ModelParams& p, int n_segments, int levels);

}  // namespace resopt
