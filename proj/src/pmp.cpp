#include "resopt/pmp.hpp"

#include <algorithm>

namespace resopt {

double switching_coefficient(const Adjoint& lam, const ModelParams& p) {
    return p.p_e * p.beta - lam.lam_s * p.alpha + lam.lam_e * p.beta;
}

double optimal_control(double h_tilde, double r, const ModelParams& p) {
    const double gain = h_tilde * r;
    if (gain <= p.c1) return 0.0;
    return std::min((gain - p.c1) / (2.0 * p.c2), 1.0);
}

double hamiltonian(const State& x, const Adjoint& lam, double u, const ModelParams& p,
                   AdjointMode mode) {
    const State d = state_rhs(x, u, p);
    double payoff = running_reward(x, u, p);
    if (mode == AdjointMode::PaperEq9) payoff += p.p_e * p.delta_e * x.e;
    return payoff + lam.lam_s * d.s + lam.lam_r * d.r + lam.lam_e * d.e;
}

HamiltonianParts hamiltonian_parts(const State& x, const Adjoint& lam, const ModelParams& p,
                                   AdjointMode mode) {
    HamiltonianParts parts;
    parts.h_base = hamiltonian(x, lam, 0.0, p, mode);
    parts.h_tilde = switching_coefficient(lam, p);
    return parts;
}

Mat3 adjoint_matrix(double u, const ModelParams& p, AdjointMode mode) {
    // dlam/dt = discount*lam - dH/dx for the corrected mode, i.e.
    // B = discount*I - A(u)^T together with the reward gradient in the
    // forcing. The published variant flips the alpha coupling in the
    // lambda_R row and drops the lambda_E reward term.
    const ProductivityFn eta = p.productivity();
    Mat3 b;
    b(0, 0) = p.discount + p.delta_s;
    b(0, 1) = -eta.derivative(0.0);
    b(0, 2) = 0.0;
    const double coupling = p.alpha * (1.0 - u);
    b(1, 0) = (mode == AdjointMode::PaperEq9) ? coupling : -coupling;
    b(1, 1) = p.discount + p.gamma;
    b(1, 2) = -p.beta * u;
    b(2, 0) = -p.theta;
    b(2, 1) = 0.0;
    b(2, 2) = p.discount + p.delta_e;
    return b;
}

Vec3 adjoint_forcing(double u, const ModelParams& p, AdjointMode mode) {
    Vec3 d{-p.p_s, -p.p_e * p.beta * u, 0.0};
    if (mode == AdjointMode::CorrectedFromHamiltonian) {
        d[2] = p.p_e * p.delta_e;
    }
    return d;
}

Adjoint adjoint_rhs(const State& /*x*/, const Adjoint& lam, double u, const ModelParams& p,
                    AdjointMode mode) {
    const Mat3 b = adjoint_matrix(u, p, mode);
    const Vec3 v = b * Vec3{lam.lam_s, lam.lam_r, lam.lam_e};
    const Vec3 d = adjoint_forcing(u, p, mode);
    return Adjoint{v[0] + d[0], v[1] + d[1], v[2] + d[2]};
}

}  // namespace resopt
