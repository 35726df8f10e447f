#pragma once

#include <string>
#include <vector>

#include "resopt/integrate.hpp"

namespace resopt {

/// Forward-backward sweep settings. An empty initial_guess means
/// u = 0.5 on every interval.
struct SweepConfig {
    double relaxation = 0.5;   // u <- (1-w)*u_old + w*u_new
    double tol_control = 1e-6; // sup-norm stopping threshold on the raw update
    int max_iters = 1000;
    AdjointMode adjoint_mode = AdjointMode::CorrectedFromHamiltonian;
    ControlPath initial_guess;

    void validate() const;
};

enum class RegimeKind { LowerBound, Interior, UpperBound };

/// A maximal run of intervals sharing one control regime.
struct Regime {
    double t_begin = 0.0;
    double t_end = 0.0;
    RegimeKind kind = RegimeKind::Interior;
    double mean_control = 0.0;
};

/// Outcome of a solver run. Non-convergence is reported here, not
/// thrown: the caller decides whether a best-effort control is usable.
struct SolveReport {
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    double final_control_delta = 0.0;  // last sup-norm change (fbsm) or projected-gradient norm (direct)
    std::vector<Regime> regimes;
    double wall_time_sec = 0.0;
    std::string message;
};

struct FbsmResult {
    Trajectory trajectory;
    SolveReport report;
};

/// Sweep iteration: forward state pass, backward costate pass, pointwise
/// Hamiltonian maximization at the left node of each interval, then
/// relaxation. The convergence check compares the unrelaxed update
/// against the current control, so a control that is already a fixed
/// point of the sweep converges in one iteration.
FbsmResult solve_fbsm(const ModelParams& p, const SweepConfig& cfg);

/// Label every interval lower/interior/upper (eps band on each bound),
/// run-length encode, and merge any run shorter than two grid steps
/// into its neighbor so the output reflects arcs, not chatter.
std::vector<Regime> classify_regimes(const Trajectory& traj, double eps = 0.02);

}  // namespace resopt
