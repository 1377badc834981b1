#include "circ/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace circ {

namespace {

// 8-node Gauss-Legendre on [0,1]
constexpr int kGL = 8;
constexpr double kGLx[kGL] = {
    0.5 * (1.0 - 0.9602898564975363), 0.5 * (1.0 - 0.7966664774136267),
    0.5 * (1.0 - 0.5255324099163290), 0.5 * (1.0 - 0.1834346424956498),
    0.5 * (1.0 + 0.1834346424956498), 0.5 * (1.0 + 0.5255324099163290),
    0.5 * (1.0 + 0.7966664774136267), 0.5 * (1.0 + 0.9602898564975363)};
constexpr double kGLw[kGL] = {0.5 * 0.1012285362903763, 0.5 * 0.2223810344533745,
                              0.5 * 0.3137066458778873, 0.5 * 0.3626837833783620,
                              0.5 * 0.3626837833783620, 0.5 * 0.3137066458778873,
                              0.5 * 0.2223810344533745, 0.5 * 0.1012285362903763};

inline double pow_gm3(double x, double gamma) {
    if (gamma == 3.0) return 1.0;
    if (gamma == 4.0) return x;
    return std::exp((gamma - 3.0) * std::log(x));
}

// int_0^1 weight(s) (rho + s phi)^(gamma-3) ds with weight s or (1-s)
// Returns NaN on a nonpositive integrand base; callers throw outside their
// parallel regions (exceptions must not cross an omp boundary).
template <bool SWeight>
double remainder_integral(double rho, double phi, double gamma) {
    double acc = 0.0;
    for (int q = 0; q < kGL; ++q) {
        const double s = kGLx[q];
        const double base = rho + s * phi;
        if (!(base > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        acc += kGLw[q] * (SWeight ? s : 1.0 - s) * pow_gm3(base, gamma);
    }
    return acc;
}

}  // namespace

void check_positivity(const Field& phi, const BackgroundField& bg, const char* where) {
    const Grid& g = *phi.g;
    for (int i = 0; i < g.nr(); ++i)
        for (int j = 0; j < g.nz(); ++j)
            if (!(bg.rho_bar[i] + phi(i, j) > 0.0))
                throw std::runtime_error(std::string(where) +
                                         ": total density nonpositive or NaN");
}

Field q_term(const Field& phi, const BackgroundField& bg, double gamma) {
    const Grid& g = *phi.g;
    Field out(g);
    if (gamma == 2.0) return out;  // (gamma - 2) factor kills Q identically
    const double coef = 0.5 * gamma * (gamma - 2.0);
    bool bad = false;
#pragma omp parallel for schedule(static) reduction(||: bad)
    for (int i = 0; i < g.nr(); ++i) {
        const double rho = bg.rho_bar[i];
        for (int j = 0; j < g.nz(); ++j) {
            const double p = phi(i, j);
            const double val = remainder_integral<true>(rho, p, gamma);
            bad = bad || std::isnan(val);
            out(i, j) = coef * p * p * val;
        }
    }
    if (bad) throw std::runtime_error("q_term: rho_bar + s phi nonpositive");
    return out;
}

Field pressure_remainder(const Field& phi, const BackgroundField& bg, const FlowParams& params) {
    const Grid& g = *phi.g;
    Field out(g);
    const double gamma = params.gamma;
    if (gamma == 2.0) return out;
    const double coef = params.A * gamma * (gamma - 2.0);
    bool bad = false;
#pragma omp parallel for schedule(static) reduction(||: bad)
    for (int i = 0; i < g.nr(); ++i) {
        const double rho = bg.rho_bar[i];
        for (int j = 0; j < g.nz(); ++j) {
            const double p = phi(i, j);
            const double val = remainder_integral<false>(rho, p, gamma);
            bad = bad || std::isnan(val);
            out(i, j) = coef * p * p * val;
        }
    }
    if (bad) throw std::runtime_error("pressure_remainder: rho_bar + s phi nonpositive");
    return out;
}

Field nonlinear_f(const State& state, const BackgroundField& bg) {
    (void)bg;
    const Grid& g = state.grid();
    Field mr(g), mz(g);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < g.nr(); ++i)
        for (int j = 0; j < g.nz(); ++j) {
            mr(i, j) = state.phi(i, j) * state.v_r(i, j);
            mz(i, j) = state.phi(i, j) * state.v_z(i, j);
        }
    Field div = ops::cyl_div(mr, mz);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < g.nr(); ++i)
        for (int j = 0; j < g.nz(); ++j) div(i, j) = -div(i, j);
    return div;
}

std::array<Field, 3> nonlinear_g(const State& state, const BackgroundField& bg,
                                 const FlowParams& params) {
    const Grid& g = state.grid();
    check_positivity(state.phi, bg, "nonlinear_g");

    const Field& vr = state.v_r;
    const Field& vt = state.v_theta;
    const Field& vz = state.v_z;

    Field dvr_r = ops::d_r(vr), dvr_z = ops::d_z(vr);
    Field dvt_r = ops::d_r(vt), dvt_z = ops::d_z(vt);
    Field dvz_r = ops::d_r(vz), dvz_z = ops::d_z(vz);

    Field qr = pressure_remainder(state.phi, bg, params);
    Field dq_r = ops::d_r(qr), dq_z = ops::d_z(qr);

    Field lsw_vr = ops::visc_swirl(vr);
    Field lsw_vt = ops::visc_swirl(vt);
    Field lax_vz = ops::visc_axial(vz);
    Field div = ops::cyl_div(vr, vz);
    Field ddiv_r = ops::d_r(div), ddiv_z = ops::d_z(div);

    Field g1(g), g2(g), g3(g);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < g.nr(); ++i) {
        const double r = g.r[i];
        const double rho = bg.rho_bar[i];
        for (int j = 0; j < g.nz(); ++j) {
            const double phi = state.phi(i, j);
            const double visc_coef = phi / ((phi + rho) * rho);
            g1(i, j) = vt(i, j) * vt(i, j) / r - vr(i, j) * dvr_r(i, j) -
                       vz(i, j) * dvr_z(i, j) - dq_r(i, j) -
                       params.nu1 * visc_coef * lsw_vr(i, j) -
                       params.nu2 * visc_coef * ddiv_r(i, j);
            g2(i, j) = -vr(i, j) * dvt_r(i, j) - vz(i, j) * dvt_z(i, j) -
                       vt(i, j) * vr(i, j) / r - params.nu1 * visc_coef * lsw_vt(i, j);
            g3(i, j) = -vr(i, j) * dvz_r(i, j) - vz(i, j) * dvz_z(i, j) - dq_z(i, j) -
                       params.nu1 * visc_coef * lax_vz(i, j) -
                       params.nu2 * visc_coef * ddiv_z(i, j);
        }
    }
    return {std::move(g1), std::move(g2), std::move(g3)};
}

Tendency rhs_perturbation(const State& state, const BackgroundField& bg, const FlowParams& params,
                          bool nonlinear) {
    const Grid& g = state.grid();
    check_positivity(state.phi, bg, "rhs_perturbation");

    // continuity: -(1/r) d_r(r rho_bar v_r) - d_z(rho_bar v_z)
    Field mr(g), mz(g), pphi(g);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < g.nr(); ++i) {
        const double rho = bg.rho_bar[i];
        const double gm2 = bg.rho_bar_gm2[i];
        for (int j = 0; j < g.nz(); ++j) {
            mr(i, j) = rho * state.v_r(i, j);
            mz(i, j) = rho * state.v_z(i, j);
            pphi(i, j) = gm2 * state.phi(i, j);
        }
    }
    Field divm = ops::cyl_div(mr, mz);
    Field dp_r = ops::d_r(pphi), dp_z = ops::d_z(pphi);
    Field lsw_vr = ops::visc_swirl(state.v_r);
    Field lsw_vt = ops::visc_swirl(state.v_theta);
    Field lax_vz = ops::visc_axial(state.v_z);
    Field div = ops::cyl_div(state.v_r, state.v_z);
    Field ddiv_r = ops::d_r(div), ddiv_z = ops::d_z(div);

    Tendency out(g);
    const double Ag = params.A * params.gamma;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < g.nr(); ++i) {
        const double r = g.r[i];
        const double rho = bg.rho_bar[i];
        const double inv_rho = 1.0 / rho;
        for (int j = 0; j < g.nz(); ++j) {
            out.phi(i, j) = -divm(i, j);
            out.v_r(i, j) = 2.0 * params.M0 / (r * r) * state.v_theta(i, j) -
                            Ag * dp_r(i, j) + params.nu1 * inv_rho * lsw_vr(i, j) +
                            params.nu2 * inv_rho * ddiv_r(i, j);
            out.v_theta(i, j) = params.nu1 * inv_rho * lsw_vt(i, j);
            out.v_z(i, j) = -Ag * dp_z(i, j) + params.nu1 * inv_rho * lax_vz(i, j) +
                            params.nu2 * inv_rho * ddiv_z(i, j);
        }
    }

    if (nonlinear) {
        Field f = nonlinear_f(state, bg);
        auto gg = nonlinear_g(state, bg, params);
#pragma omp parallel for schedule(static)
        for (int i = 0; i < g.nr(); ++i)
            for (int j = 0; j < g.nz(); ++j) {
                out.phi(i, j) += f(i, j);
                out.v_r(i, j) += gg[0](i, j);
                out.v_theta(i, j) += gg[1](i, j);
                out.v_z(i, j) += gg[2](i, j);
            }
    }

    // Dirichlet velocity boundaries: tendency pinned to zero
    const int nr = g.nr(), nz = g.nz();
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

std::array<Field, 4> rhs_primitive(const Field& rho, const Field& u_r, const Field& u_theta,
                                   const Field& u_z, const FlowParams& params) {
    const Grid& g = *rho.g;
    require_same_grid(rho, u_r, "rhs_primitive");
    require_same_grid(rho, u_theta, "rhs_primitive");
    require_same_grid(rho, u_z, "rhs_primitive");
    for (double x : rho.v)
        if (!(x > 0.0)) throw std::runtime_error("rhs_primitive: vacuum or NaN density");

    Field mr(g), mz(g), pressure(g);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < g.nr(); ++i)
        for (int j = 0; j < g.nz(); ++j) {
            mr(i, j) = rho(i, j) * u_r(i, j);
            mz(i, j) = rho(i, j) * u_z(i, j);
            pressure(i, j) = params.A * std::pow(rho(i, j), params.gamma);
        }
    Field divm = ops::cyl_div(mr, mz);
    Field dp_r = ops::d_r(pressure), dp_z = ops::d_z(pressure);
    Field dur_r = ops::d_r(u_r), dur_z = ops::d_z(u_r);
    Field dut_r = ops::d_r(u_theta), dut_z = ops::d_z(u_theta);
    Field duz_r = ops::d_r(u_z), duz_z = ops::d_z(u_z);
    Field lsw_ur = ops::visc_swirl(u_r);
    Field lsw_ut = ops::visc_swirl(u_theta);
    Field lax_uz = ops::visc_axial(u_z);
    Field div = ops::cyl_div(u_r, u_z);
    Field ddiv_r = ops::d_r(div), ddiv_z = ops::d_z(div);

    Field drho(g), dur(g), dut(g), duz(g);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < g.nr(); ++i) {
        const double r = g.r[i];
        for (int j = 0; j < g.nz(); ++j) {
            const double inv_rho = 1.0 / rho(i, j);
            drho(i, j) = -divm(i, j);
            dur(i, j) = -(u_r(i, j) * dur_r(i, j) + u_z(i, j) * dur_z(i, j) -
                          u_theta(i, j) * u_theta(i, j) / r) -
                        dp_r(i, j) * inv_rho + params.nu1 * inv_rho * lsw_ur(i, j) +
                        params.nu2 * inv_rho * ddiv_r(i, j);
            dut(i, j) = -(u_r(i, j) * dut_r(i, j) + u_z(i, j) * dut_z(i, j) +
                          u_theta(i, j) * u_r(i, j) / r) +
                        params.nu1 * inv_rho * lsw_ut(i, j);
            duz(i, j) = -(u_r(i, j) * duz_r(i, j) + u_z(i, j) * duz_z(i, j)) -
                        dp_z(i, j) * inv_rho + params.nu1 * inv_rho * lax_uz(i, j) +
                        params.nu2 * inv_rho * ddiv_z(i, j);
        }
    }
    return {std::move(drho), std::move(dur), std::move(dut), std::move(duz)};
}

State make_bump_ic(const BumpSpec& bump, const Grid& grid) {
    if (!(bump.amplitude >= 0.0)) throw std::invalid_argument("make_bump_ic: amplitude >= 0");
    const double rr0 = bump.r0 - 5.0 * bump.sigma_r;
    const double rr1 = bump.r0 + 5.0 * bump.sigma_r;
    const double zz0 = bump.z0 - 5.0 * bump.sigma_z;
    const double zz1 = bump.z0 + 5.0 * bump.sigma_z;
    if (!(rr0 > 1.0 && rr1 < grid.spec.r_max && zz0 > grid.spec.z_min &&
          zz1 < grid.spec.z_max))
        throw std::invalid_argument("make_bump_ic: bump support reaches a boundary");

    State s(grid);
    for (int c = 0; c < 4; ++c) {
        if (!bump.mask[static_cast<std::size_t>(c)]) continue;
        Field& f = s.component(c);
        for (int i = 0; i < grid.nr(); ++i) {
            const double xr = (grid.r[i] - bump.r0) / bump.sigma_r;
            for (int j = 0; j < grid.nz(); ++j) {
                const double xz = (grid.z[j] - bump.z0) / bump.sigma_z;
                const double s2 = (xr * xr + xz * xz) / 25.0;
                if (s2 >= 1.0) continue;
                const double cut = (1.0 - s2) * (1.0 - s2) * (1.0 - s2);
                f(i, j) = bump.amplitude * std::exp(-xr * xr - xz * xz) * cut;
            }
        }
    }
    // cutoff already vanishes at the wall; pin exactly anyway
    for (int j = 0; j < grid.nz(); ++j) {
        s.v_r(0, j) = s.v_theta(0, j) = s.v_z(0, j) = 0.0;
    }
    return s;
}

}  // namespace circ
