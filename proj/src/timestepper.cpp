#include "circ/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace circ {

namespace {

State rk4_from_k1(const State& s, double t, double dt, const Tendency& k1,
                  const BackgroundField& bg, const FlowParams& params, bool nonlinear,
                  const ForcingFn& forcing) {
    const Grid& g = s.grid();
    const int nr = g.nr(), nz = g.nz();

    auto axpy = [&](const State& base, double a, const Tendency& k) {
        State out(g);
#pragma omp parallel for schedule(static)
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nz; ++j)
                for (int c = 0; c < 4; ++c)
                    out.component(c)(i, j) = base.component(c)(i, j) + a * k.component(c)(i, j);
        return out;
    };
    auto eval = [&](const State& u, double tu) {
        Tendency k = rhs_perturbation(u, bg, params, nonlinear);
        if (forcing) forcing(tu, k);
        return k;
    };

    State s2 = axpy(s, 0.5 * dt, k1);
    Tendency k2 = eval(s2, t + 0.5 * dt);
    State s3 = axpy(s, 0.5 * dt, k2);
    Tendency k3 = eval(s3, t + 0.5 * dt);
    State s4 = axpy(s, dt, k3);
    Tendency k4 = eval(s4, t + dt);

    State out(g);
    const double c = dt / 6.0;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nz; ++j)
            for (int cc = 0; cc < 4; ++cc)
                out.component(cc)(i, j) =
                    s.component(cc)(i, j) +
                    c * (k1.component(cc)(i, j) + 2.0 * k2.component(cc)(i, j) +
                         2.0 * k3.component(cc)(i, j) + k4.component(cc)(i, j));

    // exact Dirichlet enforcement on the velocity
    for (int j = 0; j < nz; ++j) {
        out.v_r(0, j) = out.v_theta(0, j) = out.v_z(0, j) = 0.0;
        out.v_r(nr - 1, j) = out.v_theta(nr - 1, j) = out.v_z(nr - 1, j) = 0.0;
    }
    if (!g.periodic_z()) {
        for (int i = 0; i < nr; ++i) {
            out.v_r(i, 0) = out.v_theta(i, 0) = out.v_z(i, 0) = 0.0;
            out.v_r(i, nz - 1) = out.v_theta(i, nz - 1) = out.v_z(i, nz - 1) = 0.0;
        }
    }
    return out;
}

}  // namespace

double stable_dt(const State& state, const BackgroundField& bg, const Grid& grid,
                 const FlowParams& params, double cfl_safety) {
    const int nr = grid.nr(), nz = grid.nz();
    const double nu = params.nu1 + std::max(params.nu2, 0.0);
    const double gm1 = params.gamma - 1.0;
    double dt_min = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(min : dt_min)
    for (int i = 0; i < nr; ++i) {
        const double h = std::min(grid.dr_local(i), grid.dz);
        for (int j = 0; j < nz; ++j) {
            const double rho = bg.rho_bar[i] + state.phi(i, j);
            const double c = std::sqrt(params.gamma * params.A * std::exp(gm1 * std::log(rho)));
            const double ut = bg.u_theta_bar[i] + state.v_theta(i, j);
            const double speed = std::sqrt(state.v_r(i, j) * state.v_r(i, j) + ut * ut +
                                           state.v_z(i, j) * state.v_z(i, j));
            const double dt_adv = h / (speed + c);
            const double dt_visc = rho * h * h / (4.0 * nu);
            dt_min = std::min(dt_min, std::min(dt_adv, dt_visc));
        }
    }
    const double dt = cfl_safety * dt_min;
    if (!(dt > 0.0)) throw std::runtime_error("stable_dt: nonpositive time step");
    return dt;
}

State rk4_step(const State& state, double t, double dt, const BackgroundField& bg,
               const FlowParams& params, bool nonlinear, const ForcingFn& forcing) {
    Tendency k1 = rhs_perturbation(state, bg, params, nonlinear);
    if (forcing) forcing(t, k1);
    State out = rk4_from_k1(state, t, dt, k1, bg, params, nonlinear, forcing);
    check_positivity(out.phi, bg, "rk4_step");
    return out;
}

EvolveResult evolve(const State& initial, const BackgroundField& bg, const FlowParams& params,
                    const StepControl& control, const DiagSink& sink, bool nonlinear,
                    const ForcingFn& forcing) {
    control.validate();
    const Grid& g = initial.grid();
    State state = initial;
    double t = 0.0;
    long step = 0;
    while (t < control.t_end && step < control.max_steps) {
        double dt = stable_dt(state, bg, g, params, control.cfl_safety);
        if (t + dt > control.t_end) dt = control.t_end - t;
        Tendency k1 = rhs_perturbation(state, bg, params, nonlinear);
        if (forcing) forcing(t, k1);
        if (sink && step % control.diag_every == 0) sink(step, t, dt, state, k1);
        try {
            state = rk4_from_k1(state, t, dt, k1, bg, params, nonlinear, forcing);
            check_positivity(state.phi, bg, "evolve");
            for (int c = 0; c < 4; ++c)
                if (!state.component(c).all_finite())
                    throw std::runtime_error("evolve: NaN detected in state");
        } catch (const std::exception& e) {
            throw std::runtime_error("evolve failed at step " + std::to_string(step) + ": " +
                                     e.what());
        }
        t += dt;
        ++step;
    }
    if (sink) {  // final state is always one step past the last in-loop sample
        Tendency k1 = rhs_perturbation(state, bg, params, nonlinear);
        if (forcing) forcing(t, k1);
        sink(step, t, 0.0, state, k1);
    }
    return {std::move(state), t, step};
}

}  // namespace circ
