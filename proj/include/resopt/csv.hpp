#pragma once

#include <iosfwd>
#include <string>

#include "resopt/scenarios.hpp"

namespace resopt {

/// Column layouts are fixed; downstream tooling greps for these exact
/// headers.
inline constexpr const char* kTrajectoryHeader =
    "t,S,R,E,u,lambda_S,lambda_R,lambda_E,"
    "lambda_hat_S,lambda_hat_R,lambda_hat_E,switch_raw,switch_clamped";
inline constexpr const char* kComparisonHeader =
    "scenario,J,switch_1,switch_2,switch_3,S_T,R_T,E_T,status";

/// One row per node. The control column repeats the last interval's
/// value at the final node. lambda_hat_* are the discounted costates
/// exp(-discount*t)*lambda, switch_raw is h_tilde*R - c1, and
/// switch_clamped is switch_raw clamped to [-2, 2] for plotting.
/// Costate columns are empty when the trajectory has no adjoint pass.
/// Values are written with 16 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const ModelParams& p);
void write_trajectory_csv(const std::string& path, const Trajectory& traj, const ModelParams& p);

/// Read back a trajectory CSV written by write_trajectory_csv. Only the
/// t, S, R, E, u columns are consumed; the control path is the u column
/// at nodes 0..N-1. Throws std::runtime_error on malformed input.
ControlPath read_control_csv(const std::string& path);

void write_comparison_csv(std::ostream& out, const ComparisonReport& rep);
void write_comparison_csv(const std::string& path, const ComparisonReport& rep);

}  // namespace resopt
