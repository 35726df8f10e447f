#pragma once

#include "resopt/linalg.hpp"
#include "resopt/model.hpp"

namespace resopt {

/// Current-value costates paired with (S, R, E).
struct Adjoint {
    double lam_s = 0.0;
    double lam_r = 0.0;
    double lam_e = 0.0;
};

/// Two costate conventions are supported. PaperEq9 reproduces a
/// published set of costate equations verbatim, paired with a payoff
/// that books energy revenue as p_E*beta*u*R. CorrectedFromHamiltonian
/// uses the running reward actually integrated by the objective (which
/// subtracts p_E*delta_E*E) and derives the costate equations from that
/// Hamiltonian; the two differ in the lambda_R equation (sign of the
/// alpha*(1-u) coupling) and in the lambda_E forcing term.
enum class AdjointMode { PaperEq9, CorrectedFromHamiltonian };

/// Decomposition of the current-value Hamiltonian by control power:
///   H(u) = h_base + h_tilde * R * u - c1*u - c2*u^2
/// where h_tilde = p_e*beta - lam_s*alpha + lam_e*beta collects every
/// coefficient of u*R. h_base is H evaluated at u = 0.
struct HamiltonianParts {
    double h_base = 0.0;
    double h_tilde = 0.0;
};

/// h_tilde alone; independent of u and of the adjoint mode.
double switching_coefficient(const Adjoint& lam, const ModelParams& p);

/// Pointwise maximizer of H over u in [0,1] given h_tilde and the
/// residue level r:
///   0                         if h_tilde*r <= c1
///   min((h_tilde*r - c1)/(2*c2), 1) otherwise.
double optimal_control(double h_tilde, double r, const ModelParams& p);

/// Current-value Hamiltonian: payoff + lam . state_rhs. The corrected
/// mode's payoff is running_reward; the paper mode books energy revenue
/// as p_E*beta*u*R, i.e. it is larger by exactly p_E*delta_E*E. The
/// modes agree whenever E = 0, and their u-dependence is identical.
double hamiltonian(const State& x, const Adjoint& lam, double u, const ModelParams& p,
                   AdjointMode mode);

/// Split H(u) = h_base + h_tilde*u*R - C(u); h_base is H at u = 0.
HamiltonianParts hamiltonian_parts(const State& x, const Adjoint& lam, const ModelParams& p,
                                   AdjointMode mode);

/// Costate right-hand side dlam/dt in the chosen mode. Both modes share
/// the lambda_S equation; see AdjointMode for where they differ.
Adjoint adjoint_rhs(const State& x, const Adjoint& lam, double u, const ModelParams& p,
                    AdjointMode mode);

/// Matrix B(u) and forcing d(u) with adjoint_rhs == B*lam + d (the
/// costate dynamics are affine in lam for fixed control).
Mat3 adjoint_matrix(double u, const ModelParams& p, AdjointMode mode);
Vec3 adjoint_forcing(double u, const ModelParams& p, AdjointMode mode);

}  // namespace resopt
