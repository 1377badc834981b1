#include "circ/background.hpp"

#include <cmath>

#include "circ/ops.hpp"
#include "circ/reduce.hpp"

namespace circ {

double pow_gm2(double x, double gamma) {
    if (gamma == 2.0) return 1.0;
    if (gamma == 3.0) return x;
    return std::exp((gamma - 2.0) * std::log(x));
}

double bar_rho(double r, const FlowParams& p) {
    if (r < 1.0) throw std::domain_error("bar_rho: r >= 1 required");
    const double gm1 = p.gamma - 1.0;
    const double base = std::exp(gm1 * std::log(p.rho_bar0)) +
                        gm1 * p.M0 * p.M0 / (2.0 * p.A * p.gamma) * (1.0 - 1.0 / (r * r));
    if (p.gamma == 2.0) return base;
    return std::exp(std::log(base) / gm1);
}

double bar_rho_prime(double r, const FlowParams& p) {
    if (r < 1.0) throw std::domain_error("bar_rho_prime: r >= 1 required");
    const double rho = bar_rho(r, p);
    // rho^(2-gamma) = 1 / rho^(gamma-2)
    return p.M0 * p.M0 / (pow_gm2(rho, p.gamma) * p.A * p.gamma * r * r * r);
}

double bar_utheta(double r, const FlowParams& p) {
    if (r < 1.0) throw std::domain_error("bar_utheta: r >= 1 required");
    return p.M0 / r;
}

double bar_rho_infinity(const FlowParams& p) {
    const double gm1 = p.gamma - 1.0;
    const double base =
        std::exp(gm1 * std::log(p.rho_bar0)) + gm1 * p.M0 * p.M0 / (2.0 * p.A * p.gamma);
    if (p.gamma == 2.0) return base;
    return std::exp(std::log(base) / gm1);
}

BackgroundField build_background(const Grid& grid, const FlowParams& params) {
    params.validate();
    BackgroundField bg;
    bg.g = &grid;
    bg.params = params;
    const int nr = grid.nr();
    bg.rho_bar.resize(nr);
    bg.rho_bar_prime.resize(nr);
    bg.rho_bar_gm2.resize(nr);
    bg.u_theta_bar.resize(nr);
    bg.sound_sq.resize(nr);
    for (int i = 0; i < nr; ++i) {
        const double r = grid.r[i];
        const double rho = bar_rho(r, params);
        bg.rho_bar[i] = rho;
        bg.rho_bar_prime[i] = bar_rho_prime(r, params);
        bg.rho_bar_gm2[i] = pow_gm2(rho, params.gamma);
        bg.u_theta_bar[i] = bar_utheta(r, params);
        bg.sound_sq[i] = params.gamma * params.A * rho * bg.rho_bar_gm2[i] * rho;
    }
    return bg;
}

namespace {

double l2r_norm(const Field& f) {
    const Grid& g = *f.g;
    std::vector<double> buf(g.size());
    for (int i = 0; i < g.nr(); ++i)
        for (int j = 0; j < g.nz(); ++j) {
            const double w = g.quad_r[i] * g.quad_z[j] * g.r[i];
            const double x = f(i, j);
            buf[g.idx(i, j)] = w * x * x;
        }
    return std::sqrt(pairwise_sum(buf));
}

}  // namespace

BackgroundResidual background_residual(const Grid& grid, const FlowParams& params) {
    params.validate();
    const BackgroundField bg = build_background(grid, params);
    const int nr = grid.nr(), nz = grid.nz();

    Field ur(grid);  // identically zero
    Field utheta(grid), pressure(grid);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nz; ++j) {
            utheta(i, j) = bg.u_theta_bar[i];
            pressure(i, j) = params.A * std::pow(bg.rho_bar[i], params.gamma);
        }

    BackgroundResidual res;

    // continuity: (1/r) d_r(r rho_bar u_r), u_r == 0 kills it termwise
    {
        Field m(grid);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nz; ++j) m(i, j) = grid.r[i] * bg.rho_bar[i] * ur(i, j);
        Field dm = ops::d_r(m);
        Field cont(grid);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nz; ++j) cont(i, j) = dm(i, j) / grid.r[i];
        res.continuity = l2r_norm(cont);
    }

    // r-momentum: -rho_bar u_theta^2 / r + d_r P  (viscous term carries u_r == 0)
    {
        Field dp = ops::d_r(pressure);
        Field rw(grid);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nz; ++j) rw(i, j) = grid.r[i] * ur(i, j);
        Field inner = ops::d_r(rw);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nz; ++j) inner(i, j) /= grid.r[i];
        Field visc = ops::d_r(inner);
        Field rmom(grid);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nz; ++j) {
                const double cent = bg.rho_bar[i] * utheta(i, j) * utheta(i, j) / grid.r[i];
                rmom(i, j) = -cent + dp(i, j) - (params.nu1 + params.nu2) * visc(i, j);
            }
        res.r_momentum = l2r_norm(rmom);
    }

    // theta-momentum: advective part vanishes with u_r == 0; the viscous term
    // applies the nested stencil to r u_theta, constant to round-off
    {
        Field rw(grid);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nz; ++j) rw(i, j) = grid.r[i] * utheta(i, j);
        Field inner = ops::d_r(rw);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nz; ++j) inner(i, j) /= grid.r[i];
        Field visc = ops::d_r(inner);
        Field dut = ops::d_r(utheta);
        Field tmom(grid);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nz; ++j) {
                const double adv = bg.rho_bar[i] * (ur(i, j) * dut(i, j) +
                                                    utheta(i, j) * ur(i, j) / grid.r[i]);
                tmom(i, j) = adv - params.nu1 * visc(i, j);
            }
        res.theta_momentum = l2r_norm(tmom);
    }

    return res;
}

}  // namespace circ
