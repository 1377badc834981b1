#include <cmath>
#include <random>

#include "circ/background.hpp"
#include "doctest.h"

using namespace circ;

namespace {

FlowParams make_params(double gamma) {
    FlowParams p;
    p.gamma = gamma;
    return p;
}

}  // namespace

TEST_CASE("wall values match the boundary data") {
    for (double gamma : {1.4, 2.0, 3.0}) {
        FlowParams p = make_params(gamma);
        CHECK(bar_rho(1.0, p) == doctest::Approx(p.rho_bar0).epsilon(1e-14));
        CHECK(bar_utheta(1.0, p) == p.M0);
    }
    FlowParams p;
    p.M0 = 1.0;
    CHECK(bar_utheta(2.0, p) == 0.5);
    CHECK_THROWS(bar_utheta(0.5, p));
}

TEST_CASE("invariant r^3 rho' rho^(gamma-2) = M0^2/(A gamma) at sampled radii") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(1.0, 100.0);
    FlowParams sets[5];
    sets[0] = make_params(1.4);
    sets[1] = make_params(2.0);
    sets[2] = make_params(3.0);
    sets[3] = make_params(1.4);
    sets[3].A = 2.5;
    sets[3].M0 = 0.7;
    sets[4] = make_params(2.2);
    sets[4].rho_bar0 = 1.5;
    for (const FlowParams& p : sets) {
        const double target = p.M0 * p.M0 / (p.A * p.gamma);
        for (int k = 0; k < 10000; ++k) {
            const double r = dist(rng);
            const double lhs =
                r * r * r * bar_rho_prime(r, p) * pow_gm2(bar_rho(r, p), p.gamma);
            CHECK(std::abs(lhs - target) <= 1e-12 * target);
        }
    }
}

TEST_CASE("radial momentum balance A gamma rho^(g-1) rho' = rho utheta^2 / r") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(1.0, 100.0);
    for (double gamma : {1.4, 2.0, 3.0}) {
        FlowParams p = make_params(gamma);
        for (int k = 0; k < 2000; ++k) {
            const double r = dist(rng);
            const double rho = bar_rho(r, p);
            const double lhs = p.A * p.gamma * std::pow(rho, gamma - 1.0) * bar_rho_prime(r, p);
            const double rhs = rho * bar_utheta(r, p) * bar_utheta(r, p) / r;
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
        }
    }
}

TEST_CASE("bar_rho_prime agrees with a centered difference of bar_rho") {
    FlowParams p = make_params(1.4);
    const double h = 1e-6;
    for (double r : {1.5, 3.0, 10.0, 50.0}) {
        const double fd = (bar_rho(r + h, p) - bar_rho(r - h, p)) / (2.0 * h);
        CHECK(bar_rho_prime(r, p) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("build_background tabulation is consistent and monotone") {
    GridSpec spec;
    spec.n_r = 64;
    spec.n_z = 16;
    Grid grid = build_grid(spec);
    FlowParams p = make_params(1.4);
    BackgroundField bg = build_background(grid, p);
    CHECK(bg.rho_bar[0] == doctest::Approx(p.rho_bar0).epsilon(1e-14));
    CHECK(bg.u_theta_bar[0] == p.M0);
    const double target = p.M0 * p.M0 / (p.A * p.gamma);
    for (int i = 0; i < grid.nr(); ++i) {
        const double r = grid.r[i];
        CHECK(bg.rho_bar[i] == doctest::Approx(bar_rho(r, p)).epsilon(1e-14));
        const double inv = r * r * r * bg.rho_bar_prime[i] * bg.rho_bar_gm2[i];
        CHECK(std::abs(inv - target) <= 1e-12 * target);
        if (i > 0) CHECK(bg.rho_bar[i] >= bg.rho_bar[i - 1]);
        CHECK(bg.rho_bar[i] <= bar_rho_infinity(p));
    }
}

TEST_CASE("background residuals: exact where analytic, O(h^2) in r-momentum") {
    FlowParams p = make_params(1.4);
    GridSpec coarse;
    coarse.n_r = 64;
    coarse.n_z = 16;
    GridSpec fine = coarse;
    fine.n_r = 127;  // interval count doubles exactly (63 -> 126)
    BackgroundResidual rc = background_residual(build_grid(coarse), p);
    BackgroundResidual rf = background_residual(build_grid(fine), p);
    CHECK(rc.continuity == 0.0);
    CHECK(rc.theta_momentum <= 1e-12);
    CHECK(rf.theta_momentum <= 1e-12);
    const double factor = rc.r_momentum / rf.r_momentum;
    CHECK(factor >= 3.7);
    CHECK(factor <= 4.3);
}

TEST_CASE("gamma = 2 branch of the closed form") {
    FlowParams p = make_params(2.0);
    for (double r : {1.0, 2.0, 8.0}) {
        const double expect = p.rho_bar0 + p.M0 * p.M0 / (2.0 * p.A * 2.0) * (1.0 - 1.0 / (r * r));
        CHECK(bar_rho(r, p) == doctest::Approx(expect).epsilon(1e-14));
        CHECK(pow_gm2(bar_rho(r, p), 2.0) == 1.0);
    }
}
