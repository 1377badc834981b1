#pragma once

#include <array>

#include "circ/background.hpp"
#include "circ/grid.hpp"
#include "circ/ops.hpp"
#include "circ/params.hpp"

namespace circ {

/// Perturbation unknowns (phi, v_r, v_theta, v_z) about the background.
struct State {
    Field phi, v_r, v_theta, v_z;

    State() = default;
    explicit State(const Grid& g) : phi(g), v_r(g), v_theta(g), v_z(g) {}

    const Grid& grid() const { return *phi.g; }

    Field& component(int c) {
        switch (c) {
            case 0: return phi;
            case 1: return v_r;
            case 2: return v_theta;
            default: return v_z;
        }
    }
    const Field& component(int c) const { return const_cast<State*>(this)->component(c); }
};

using Tendency = State;

/// Checks rho_bar + phi > 0 everywhere; throws on violation or NaN.
void check_positivity(const Field& phi, const BackgroundField& bg, const char* where);

/// Paper remainder Q(rho_bar, phi) = gamma (gamma-2) / 2 phi^2
/// int_0^1 (rho_bar + s phi)^(gamma-3) s ds, 8-node Gauss-Legendre in s.
/// Vanishes identically at gamma = 2.
Field q_term(const Field& phi, const BackgroundField& bg, double gamma);

/// Exact second-order remainder of the pressure-gradient expansion,
/// A gamma (gamma-2) phi^2 int_0^1 (1-s) (rho_bar + s phi)^(gamma-3) ds.
/// This is what the perturbation RHS subtracts (through its gradient) so the
/// perturbation and primitive formulations agree to discretization error.
Field pressure_remainder(const Field& phi, const BackgroundField& bg, const FlowParams& params);

/// f = -(1/r) d_r(r phi v_r) - d_z(phi v_z)
Field nonlinear_f(const State& state, const BackgroundField& bg);

/// g1, g2, g3 of the perturbation system. The nu1 bracket of g3 uses
/// (1/r) d_r v_z, consistent with the axial momentum equation.
std::array<Field, 3> nonlinear_g(const State& state, const BackgroundField& bg,
                                 const FlowParams& params);

/// Full right-hand side of the perturbation system; zero state maps to zero
/// tendency bitwise. Wall (and Dirichlet outer) velocity tendencies are zeroed.
/// With nonlinear == false the f and g terms are dropped (linearized RHS).
Tendency rhs_perturbation(const State& state, const BackgroundField& bg, const FlowParams& params,
                          bool nonlinear = true);

/// Time derivatives of the primitive system (rho, u_r, u_theta, u_z),
/// momentum equations divided by rho. Cross-check path.
std::array<Field, 4> rhs_primitive(const Field& rho, const Field& u_r, const Field& u_theta,
                                   const Field& u_z, const FlowParams& params);

/// Compactly supported Gaussian bump initial data.
struct BumpSpec {
    double amplitude = 1e-3;
    double r0 = 8.0, z0 = 0.0;
    double sigma_r = 1.2, sigma_z = 1.2;
    std::array<bool, 4> mask = {true, true, true, true};  // phi, v_r, v_theta, v_z
};

State make_bump_ic(const BumpSpec& bump, const Grid& grid);

}  // namespace circ
