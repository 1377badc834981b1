#include <cmath>
#include <vector>

#include "circ/timestepper.hpp"
#include "doctest.h"

using namespace circ;

namespace {

Grid make_grid(int n_r, int n_z) {
    GridSpec spec;
    spec.n_r = n_r;
    spec.n_z = n_z;
    return build_grid(spec);
}

double state_diff(const State& a, const State& b) {
    double acc = 0.0;
    for (int c = 0; c < 4; ++c)
        for (std::size_t n = 0; n < a.component(c).v.size(); ++n) {
            const double d = a.component(c).v[n] - b.component(c).v[n];
            acc += d * d;
        }
    return std::sqrt(acc);
}

}  // namespace

TEST_CASE("stable_dt: deterministic, viscosity-monotone, O(h^2) when viscous-limited") {
    FlowParams p;
    p.nu1 = 0.5;  // strong viscosity so the parabolic bound dominates
    double dts[2];
    int idx = 0;
    for (int n : {64, 128}) {
        Grid g = make_grid(n, n);
        BackgroundField bg = build_background(g, p);
        State s(g);
        dts[idx] = stable_dt(s, bg, g, p, 0.4);
        CHECK(stable_dt(s, bg, g, p, 0.4) == dts[idx]);
        ++idx;
    }
    const double factor = dts[0] / dts[1];
    CHECK(factor >= 3.5);
    CHECK(factor <= 4.5);

    Grid g = make_grid(64, 64);
    FlowParams lo = p, hi = p;
    hi.nu1 = 1.0;
    State s(g);
    CHECK(stable_dt(s, build_background(g, hi), g, hi, 0.4) <
          stable_dt(s, build_background(g, lo), g, lo, 0.4));
}

TEST_CASE("rk4_step keeps the zero state bitwise zero and pins the wall") {
    Grid g = make_grid(48, 48);
    FlowParams p;
    BackgroundField bg = build_background(g, p);
    State zero(g);
    State next = rk4_step(zero, 0.0, 1e-3, bg, p);
    for (int c = 0; c < 4; ++c)
        for (double x : next.component(c).v) CHECK(x == 0.0);

    BumpSpec bump;
    bump.amplitude = 1e-2;
    State s = make_bump_ic(bump, g);
    State stepped = rk4_step(s, 0.0, 5e-4, bg, p);
    for (int j = 0; j < g.nz(); ++j) {
        CHECK(stepped.v_r(0, j) == 0.0);
        CHECK(stepped.v_theta(0, j) == 0.0);
        CHECK(stepped.v_z(0, j) == 0.0);
    }
}

TEST_CASE("rk4 temporal order is 4") {
    Grid g = make_grid(48, 48);
    FlowParams p;
    BackgroundField bg = build_background(g, p);
    BumpSpec bump;
    bump.amplitude = 1e-2;
    State ic = make_bump_ic(bump, g);

    auto advance = [&](double dt, int steps) {
        State s = ic;
        double t = 0.0;
        for (int n = 0; n < steps; ++n) {
            s = rk4_step(s, t, dt, bg, p, false);
            t += dt;
        }
        return s;
    };
    const double dt = 2e-3;
    State ref = advance(dt / 4.0, 16);
    const double e1 = state_diff(advance(dt, 4), ref);
    const double e2 = state_diff(advance(dt / 2.0, 8), ref);
    const double order = std::log2(e1 / e2);
    CHECK(order >= 3.7);
    CHECK(order <= 4.3);
}

TEST_CASE("evolve: zero data stays zero and the sample cadence is exact") {
    Grid g = make_grid(32, 32);
    FlowParams p;
    BackgroundField bg = build_background(g, p);
    State zero(g);
    StepControl ctl;
    ctl.t_end = 1e9;  // step-capped run
    ctl.max_steps = 20;
    ctl.diag_every = 5;

    std::vector<long> steps_seen;
    auto sink = [&](long step, double, double, const State& s, const Tendency& k1) {
        steps_seen.push_back(step);
        for (int c = 0; c < 4; ++c)
            for (double x : s.component(c).v) CHECK(x == 0.0);
        for (int c = 0; c < 4; ++c)
            for (double x : k1.component(c).v) CHECK(x == 0.0);
    };
    EvolveResult res = evolve(zero, bg, p, ctl, sink);
    CHECK(res.steps == 20);
    CHECK(steps_seen.size() == 5);  // steps 0, 5, 10, 15 and the final state
    CHECK(steps_seen.front() == 0);
    CHECK(steps_seen.back() == 20);
}

TEST_CASE("evolve reruns are bitwise identical") {
    Grid g = make_grid(48, 48);
    FlowParams p;
    BackgroundField bg = build_background(g, p);
    BumpSpec bump;
    bump.amplitude = 1e-3;
    State ic = make_bump_ic(bump, g);
    StepControl ctl;
    ctl.t_end = 0.05;
    EvolveResult a = evolve(ic, bg, p, ctl);
    EvolveResult b = evolve(ic, bg, p, ctl);
    CHECK(a.steps == b.steps);
    CHECK(a.t_final == b.t_final);
    for (int c = 0; c < 4; ++c)
        CHECK(a.final_state.component(c).v == b.final_state.component(c).v);
}
