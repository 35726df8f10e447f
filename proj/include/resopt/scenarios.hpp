#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resopt/direct.hpp"

namespace resopt {

enum class SolverChoice { Fbsm, Direct, Both };

struct Scenario {
    std::string name;
    ModelParams params;
    SolverChoice solver = SolverChoice::Direct;
    AdjointMode adjoint_mode = AdjointMode::CorrectedFromHamiltonian;
};

/// One scenario's outcome in comparison form: objective, up to three
/// regime transition times (padded with NaN), terminal state, status
/// string ("ok", "no_converge", or "error: ..." with the exception
/// text).
struct ScenarioResult {
    std::string name;
    bool ok = false;
    std::string status;
    double objective = 0.0;
    std::vector<double> switch_times;  // exactly 3 entries, NaN-padded
    State terminal;
    SolveReport report;
    std::optional<double> objective_fbsm;  // filled when solver == Both
    std::optional<double> objective_gap;   // |J_direct - J_fbsm| / max(|J_direct|, 1)
    Trajectory trajectory;
};

struct ComparisonReport {
    std::vector<ScenarioResult> results;
};

/// The four built-in studies: baseline, no-reinvestment (theta = 0),
/// short-horizon (T = 15), long-horizon (T = 30). All four derive from
/// the given base parameters and run the direct solver.
std::vector<Scenario> builtin_scenarios(const ModelParams& base = ModelParams::baseline());

/// Run each scenario, catching per-scenario failures so one bad entry
/// never aborts the batch.
ComparisonReport run_scenarios(const std::vector<Scenario>& list);

enum class SweepParameter { Theta, Horizon, PriceEnergy, LinearCost };

/// Solve the base scenario across a range of one parameter,
/// warm-starting each solve from the previous optimum. Values outside
/// the parameter's valid domain surface as failed entries, not
/// exceptions.
ComparisonReport sweep(const Scenario& base, SweepParameter which,
                       const std::vector<double>& values);

}  // namespace resopt
