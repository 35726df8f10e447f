#pragma once

#include <vector>

#include "resopt/linalg.hpp"

namespace resopt {

struct Trajectory;  // defined in integrate.hpp

/// Residue productivity eta(S) appearing in the residue balance
/// dR/dt = eta(S) - gamma*R. Only the linear form eta(S) = rho*S ships;
/// the enumeration leaves room for saturating variants. The derivative
/// is kept alongside because the costate equations need eta'(S).
enum class ProductivityKind { Linear };

struct ProductivityFn {
    ProductivityKind kind = ProductivityKind::Linear;
    double rho = 0.0;

    double operator()(double s) const { return rho * s; }
    double derivative(double /*s*/) const { return rho; }
};

/// All biophysical and economic coefficients plus horizon, grid and
/// initial conditions. Units are documented, not enforced.
struct ModelParams {
    double alpha = 0.25;     // soil enrichment per ton of returned residue [tC/t]
    double delta_s = 0.05;   // soil organic matter decay rate [1/yr]
    double rho = 0.5;        // residue productivity per unit fertility [t/(tC*yr)]
    double gamma = 0.2;      // residue loss rate [1/yr]
    double beta = 0.35;      // energy yield per ton of residue [MJ/t]
    double delta_e = 0.03;   // decay rate of accumulated energy [1/yr]
    double theta = 0.2;      // energy reinvestment efficiency [tC/(MJ*yr)]
    double discount = 0.02;  // economic discount rate [1/yr]
    double p_e = 1.0;        // unit energy price [$/MJ]
    double p_s = 0.8;        // soil fertility value [$/tC]
    double c1 = 0.8;         // linear diversion cost [$/ha*yr]
    double c2 = 1.0;         // quadratic diversion cost [$/ha*yr]
    double horizon = 25.0;   // final time T [yr]
    int n_steps = 2000;      // grid size N
    double s0 = 1.0;         // initial soil organic matter [tC/ha]
    double r0 = 0.5;         // initial residue biomass [t/ha]
    double e0 = 0.0;         // initial cumulative energy [MJ/ha]

    static ModelParams baseline() { return ModelParams{}; }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    ProductivityFn productivity() const { return ProductivityFn{ProductivityKind::Linear, rho}; }
};

/// The state triple: soil organic matter S [tC/ha], residue biomass
/// R [t/ha], cumulative energy E [MJ/ha].
struct State {
    double s = 0.0;
    double r = 0.0;
    double e = 0.0;
};

/// Right-hand side of the state dynamics for diversion fraction u:
///   dS = alpha*(1-u)*R - delta_s*S + theta*E
///   dR = eta(S) - gamma*R
///   dE = beta*u*R - delta_e*E
/// Throws std::domain_error for u outside [0,1] beyond 1e-12 or for
/// non-finite state input.
State state_rhs(const State& x, double u, const ModelParams& p);

/// System matrix A(u) with state_rhs(x,u) == A(u)*x (the dynamics are
/// linear in the state for fixed control).
Mat3 dynamics_matrix(double u, const ModelParams& p);

/// Undiscounted reward rate p_e*dE + p_s*S - C(u) with dE substituted
/// from the energy balance, so the integrand depends only on (state,
/// control). C(u) = c1*u + c2*u^2.
double running_reward(const State& x, double u, const ModelParams& p);

/// Discounted objective of a trajectory: per-interval trapezoidal
/// quadrature of exp(-discount*t)*running_reward with the interval's
/// constant control at both endpoints. Matches the Crank-Nicolson
/// transcription, so the discrete-adjoint gradient of this value is
/// exact. Throws std::invalid_argument on a grid mismatch.
double objective(const Trajectory& traj, const ModelParams& p);

/// Reward samples per node (left-aligned control; the final node reuses
/// the last interval's control).
std::vector<double> node_rewards(const Trajectory& traj, const ModelParams& p);

}  // namespace resopt
