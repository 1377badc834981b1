#pragma once

#include "circ/grid.hpp"
#include "circ/params.hpp"

namespace circ {

/// Steady circulatory background: pure swirl M0/r around the cylinder with
/// the pressure gradient balancing the centrifugal force. Closed form only.

/// rho_bar(r) = (rho_bar0^(g-1) + (g-1) M0^2 / (2 A g) (1 - 1/r^2))^(1/(g-1))
double bar_rho(double r, const FlowParams& p);

/// d rho_bar / dr = M0^2 rho_bar^(2-gamma) / (A gamma r^3), strictly positive
double bar_rho_prime(double r, const FlowParams& p);

/// M0 / r
double bar_utheta(double r, const FlowParams& p);

/// Far-field density limit, used to sanity-check domain truncation.
double bar_rho_infinity(const FlowParams& p);

/// x^(gamma-2) with short circuits at gamma = 2 and gamma = 3.
double pow_gm2(double x, double gamma);

/// Background tabulated per radial node (no z dependence) plus the derived
/// weights that appear in every RHS evaluation and energy functional.
struct BackgroundField {
    const Grid* g = nullptr;
    std::vector<double> rho_bar;       // per i-index
    std::vector<double> rho_bar_prime; // per i-index
    std::vector<double> rho_bar_gm2;   // rho_bar^(gamma-2)
    std::vector<double> u_theta_bar;   // M0 / r
    std::vector<double> sound_sq;      // gamma A rho_bar^(gamma-1)
    FlowParams params;
};

BackgroundField build_background(const Grid& grid, const FlowParams& params);

/// Discrete L^2_r norms of the three steady equations evaluated on the
/// background. Continuity and theta-momentum vanish analytically (u_r == 0,
/// r u_theta == M0); the r-momentum norm is pure discretization error.
struct BackgroundResidual {
    double continuity = 0.0;
    double theta_momentum = 0.0;
    double r_momentum = 0.0;
};

BackgroundResidual background_residual(const Grid& grid, const FlowParams& params);

}  // namespace circ
