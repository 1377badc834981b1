#pragma once

#include <functional>

#include "circ/dynamics.hpp"

namespace circ {

struct StepControl {
    double cfl_safety = 0.4;  // in (0, 1]
    double t_end = 5.0;
    long max_steps = 100000;
    int diag_every = 10;  // diagnostic cadence in steps

    void validate() const {
        if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
            throw std::invalid_argument("StepControl: cfl_safety in (0,1] required");
        if (!(t_end > 0.0)) throw std::invalid_argument("StepControl: t_end > 0 required");
        if (max_steps <= 0 || diag_every <= 0)
            throw std::invalid_argument("StepControl: positive step caps required");
    }
};

/// Explicit stability bound: cfl_safety * min(advective, viscous) time step.
double stable_dt(const State& state, const BackgroundField& bg, const Grid& grid,
                 const FlowParams& params, double cfl_safety);

/// Optional external forcing added to the tendency at stage time t.
using ForcingFn = std::function<void(double t, Tendency& tend)>;

/// Classical RK4 update. Wall velocity is re-zeroed after the update and
/// positivity of the total density is checked. `forcing` may be null.
State rk4_step(const State& state, double t, double dt, const BackgroundField& bg,
               const FlowParams& params, bool nonlinear = true,
               const ForcingFn& forcing = nullptr);

/// Called with the stage-1 tendency whenever a diagnostic sample is due.
using DiagSink =
    std::function<void(long step, double t, double dt, const State& s, const Tendency& k1)>;

struct EvolveResult {
    State final_state;
    double t_final = 0.0;
    long steps = 0;
};

/// Advance to t_end (or max_steps), invoking `sink` every diag_every steps
/// (including the initial and final states). Deterministic for a fixed
/// configuration regardless of thread count.
EvolveResult evolve(const State& initial, const BackgroundField& bg, const FlowParams& params,
                    const StepControl& control, const DiagSink& sink = nullptr,
                    bool nonlinear = true, const ForcingFn& forcing = nullptr);

}  // namespace circ
