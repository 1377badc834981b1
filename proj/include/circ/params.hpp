#pragma once

#include <stdexcept>

namespace circ {

/// Physical constants of the gas law and viscosity model.
/// P(rho) = A rho^gamma, shear viscosity nu1, second viscosity nu2.
struct FlowParams {
    double A = 1.0;         // pressure coefficient, > 0
    double gamma = 1.4;     // adiabatic exponent, > 1
    double nu1 = 0.1;       // shear viscosity, > 0
    double nu2 = 0.0;       // second viscosity, nu1 + nu2 > 0
    double rho_bar0 = 1.0;  // wall density, > 0
    double M0 = 1.0;        // wall swirl speed, > 0

    void validate() const {
        if (!(A > 0.0)) throw std::invalid_argument("FlowParams: A > 0 required");
        if (!(gamma > 1.0)) throw std::invalid_argument("FlowParams: gamma > 1 required");
        if (!(nu1 > 0.0)) throw std::invalid_argument("FlowParams: nu1 > 0 required");
        if (!(nu1 + nu2 > 0.0)) throw std::invalid_argument("FlowParams: nu1 + nu2 > 0 required");
        if (!(rho_bar0 > 0.0)) throw std::invalid_argument("FlowParams: rho_bar0 > 0 required");
        if (!(M0 > 0.0)) throw std::invalid_argument("FlowParams: M0 > 0 required");
    }
};

}  // namespace circ
