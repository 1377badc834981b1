#include "circ/mms.hpp"

#include <cmath>
#include <stdexcept>

#include "circ/diagnostics.hpp"
#include "circ/io.hpp"

namespace circ {

namespace {

// ((r-1)(r_max-r))^2 Gaussian profile, normalized to 1 at r0; exactly zero at
// both radial boundaries because the grid pins r[0] and r[n_r-1].
double radial(const ManufacturedCase& mc, double r, double r_max) {
    const double p = (r - 1.0) * (r_max - r);
    const double p0 = (mc.r0 - 1.0) * (r_max - mc.r0);
    const double q = (r - mc.r0) / mc.sigma_r;
    return (p * p) / (p0 * p0) * std::exp(-q * q);
}

struct ZParts {
    double zc, zs;  // "cosine-like" and "sine-like" axial factors
};

ZParts zparts(const ManufacturedCase& mc, const Grid& g, double z) {
    const double L = g.spec.z_max - g.spec.z_min;
    const double u = z - g.spec.z_min;
    if (g.periodic_z()) {
        const double k = 2.0 * M_PI * mc.kz / L;
        return {std::cos(k * u), std::sin(k * u)};
    }
    // Dirichlet: every axial factor vanishes at both ends
    const double s = std::sin(M_PI * mc.kz * u / L);
    return {s, s};
}

// factor = +1 samples the state, factor selects d/dt when dt is true
void fill(const ManufacturedCase& mc, const Grid& g, double t, bool time_deriv, State& out) {
    const double w = mc.omega;
    const double ct = std::cos(w * t), st = std::sin(w * t);
    // state time factors: phi ~ cos(wt); v_r, v_theta ~ sin(wt); v_z ~ cos(wt)
    const double tp = time_deriv ? -w * st : ct;
    const double tv = time_deriv ? w * ct : st;
    const double tz = time_deriv ? -w * st : ct;
    for (int i = 0; i < g.nr(); ++i) {
        const double R = radial(mc, g.r[i], g.spec.r_max);
        for (int j = 0; j < g.nz(); ++j) {
            const ZParts zp = zparts(mc, g, g.z[j]);
            out.phi(i, j) = mc.amp_phi * R * zp.zc * tp;
            out.v_r(i, j) = mc.amp_vr * R * zp.zs * tv;
            out.v_theta(i, j) = mc.amp_vt * R * zp.zc * tv;
            out.v_z(i, j) = mc.amp_vz * R * zp.zs * tz;
        }
    }
}

// closed-form radial profile derivatives
void radial_derivs(const ManufacturedCase& mc, double r, double r_max, double& R, double& R1,
                   double& R2) {
    const double p = (r - 1.0) * (r_max - r);
    const double p0 = (mc.r0 - 1.0) * (r_max - mc.r0);
    const double pp = r_max + 1.0 - 2.0 * r;  // p'
    const double q = (r - mc.r0) / mc.sigma_r;
    const double G = std::exp(-q * q);
    const double G1 = -2.0 * q / mc.sigma_r * G;
    const double G2 = (4.0 * q * q - 2.0) / (mc.sigma_r * mc.sigma_r) * G;
    const double inv = 1.0 / (p0 * p0);
    const double P2 = p * p;
    const double P21 = 2.0 * p * pp;
    const double P22 = 2.0 * pp * pp - 4.0 * p;  // p'' = -2
    R = P2 * G * inv;
    R1 = (P21 * G + P2 * G1) * inv;
    R2 = (P22 * G + 2.0 * P21 * G1 + P2 * G2) * inv;
}

// Linearized RHS of the perturbation system evaluated with analytic spatial
// derivatives of the manufactured solution. Forcing built from this keeps the
// stencil truncation error in the evolved solution, so a convergence study
// against the analytic solution sees the full O(h^2) of the scheme.
Tendency analytic_linear_rhs(const ManufacturedCase& mc, const Grid& g,
                             const BackgroundField& bg, const FlowParams& params, double t) {
    const double w = mc.omega;
    const double tp = std::cos(w * t), tv = std::sin(w * t), tz = std::cos(w * t);
    const double L = g.spec.z_max - g.spec.z_min;
    const double Ag = params.A * params.gamma;
    Tendency out(g);
    for (int i = 0; i < g.nr(); ++i) {
        const double r = g.r[i];
        double R, R1, R2;
        radial_derivs(mc, r, g.spec.r_max, R, R1, R2);
        const double rho = bg.rho_bar[i];
        const double rho1 = bg.rho_bar_prime[i];
        const double gm2 = bg.rho_bar_gm2[i];
        const double gm3 = gm2 / rho;
        const double inv_rho = 1.0 / rho;
        const double swirl_r = R2 + R1 / r - R / (r * r);  // radial part of visc_swirl
        const double axial_r = R2 + R1 / r;                // radial part of visc_axial
        for (int j = 0; j < g.nz(); ++j) {
            const double u = g.z[j] - g.spec.z_min;
            double zc, zs, zc1, zs1, zc2, zs2;
            if (g.periodic_z()) {
                const double k = 2.0 * M_PI * mc.kz / L;
                zc = std::cos(k * u);
                zs = std::sin(k * u);
                zc1 = -k * zs;
                zs1 = k * zc;
                zc2 = -k * k * zc;
                zs2 = -k * k * zs;
            } else {
                const double k = M_PI * mc.kz / L;
                zc = zs = std::sin(k * u);
                zc1 = zs1 = k * std::cos(k * u);
                zc2 = zs2 = -k * k * zc;
            }
            const double div = tv * mc.amp_vr * zs * (R1 + R / r) + tz * mc.amp_vz * R * zs1;
            const double div_r = tv * mc.amp_vr * zs * (R2 + R1 / r - R / (r * r)) +
                                 tz * mc.amp_vz * R1 * zs1;
            const double div_z = tv * mc.amp_vr * zs1 * (R1 + R / r) + tz * mc.amp_vz * R * zs2;
            out.phi(i, j) = -(rho1 * mc.amp_vr * R * zs * tv + rho * div);
            out.v_r(i, j) = 2.0 * params.M0 / (r * r) * mc.amp_vt * R * zc * tv -
                            Ag * ((params.gamma - 2.0) * gm3 * rho1 * R + gm2 * R1) *
                                mc.amp_phi * zc * tp +
                            params.nu1 * inv_rho * mc.amp_vr * (swirl_r * zs + R * zs2) * tv +
                            params.nu2 * inv_rho * div_r;
            out.v_theta(i, j) =
                params.nu1 * inv_rho * mc.amp_vt * (swirl_r * zc + R * zc2) * tv;
            out.v_z(i, j) = -Ag * gm2 * mc.amp_phi * R * zc1 * tp +
                            params.nu1 * inv_rho * mc.amp_vz * (axial_r * zs + R * zs2) * tz +
                            params.nu2 * inv_rho * div_z;
        }
    }
    // match the discrete system's clamped velocity rows
    const int nr = g.nr(), nz = g.nz();
    for (int j = 0; j < nz; ++j) {
        out.v_r(0, j) = out.v_theta(0, j) = out.v_z(0, j) = 0.0;
        out.v_r(nr - 1, j) = out.v_theta(nr - 1, j) = out.v_z(nr - 1, j) = 0.0;
    }
    if (!g.periodic_z())
        for (int i = 0; i < nr; ++i) {
            out.v_r(i, 0) = out.v_theta(i, 0) = out.v_z(i, 0) = 0.0;
            out.v_r(i, nz - 1) = out.v_theta(i, nz - 1) = out.v_z(i, nz - 1) = 0.0;
        }
    return out;
}

}  // namespace

State manufactured_state(const ManufacturedCase& mc, const Grid& grid, double t) {
    State s(grid);
    fill(mc, grid, t, false, s);
    return s;
}

Tendency manufactured_dt(const ManufacturedCase& mc, const Grid& grid, double t) {
    Tendency d(grid);
    fill(mc, grid, t, true, d);
    return d;
}

Tendency manufactured_forcing(const ManufacturedCase& mc, double t, const Grid& grid,
                              const BackgroundField& bg, const FlowParams& params) {
    State s = manufactured_state(mc, grid, t);
    Tendency rhs = rhs_perturbation(s, bg, params, true);
    Tendency f = manufactured_dt(mc, grid, t);
    for (int c = 0; c < 4; ++c) {
        Field& out = f.component(c);
        const Field& r = rhs.component(c);
        for (std::size_t n = 0; n < out.v.size(); ++n) out.v[n] -= r.v[n];
    }
    return f;
}

StudyResult convergence_study(const ManufacturedCase& mc, const std::vector<GridSpec>& ladder,
                              const FlowParams& params, double t_end, double cfl_safety) {
    if (ladder.size() < 3)
        throw std::invalid_argument("convergence_study: ladder of >= 3 grids required");
    for (std::size_t k = 1; k < ladder.size(); ++k)
        if (ladder[k].n_r != 2 * ladder[k - 1].n_r || ladder[k].n_z != 2 * ladder[k - 1].n_z)
            throw std::invalid_argument(
                "convergence_study: node counts must double at each ladder level");

    StudyResult result;
    for (const GridSpec& spec : ladder) {
        Grid grid = build_grid(spec);
        BackgroundField bg = build_background(grid, params);
        State initial = manufactured_state(mc, grid, 0.0);
        // forcing from the analytic linearized RHS: the evolved error then
        // carries the stencil truncation, which is what the study measures
        ForcingFn forcing = [&](double t, Tendency& k) {
            Tendency dt_exact = manufactured_dt(mc, grid, t);
            Tendency rhs_exact = analytic_linear_rhs(mc, grid, bg, params, t);
            for (int c = 0; c < 4; ++c) {
                Field& out = k.component(c);
                for (std::size_t n = 0; n < out.v.size(); ++n)
                    out.v[n] += dt_exact.component(c).v[n] - rhs_exact.component(c).v[n];
            }
        };
        StepControl control;
        control.cfl_safety = cfl_safety;
        control.t_end = t_end;
        control.max_steps = 2000000;
        EvolveResult run = evolve(initial, bg, params, control, nullptr, false, forcing);

        State exact = manufactured_state(mc, grid, run.t_final);
        StudyRow row;
        row.n_r = spec.n_r;
        row.n_z = spec.n_z;
        row.h = 1.0 / (spec.n_r - 1);
        for (int c = 0; c < 4; ++c) {
            Field diff(grid);
            const Field& a = run.final_state.component(c);
            const Field& b = exact.component(c);
            for (std::size_t n = 0; n < diff.v.size(); ++n) diff.v[n] = a.v[n] - b.v[n];
            row.err[c] = weighted_lp(diff, 1.0, 2.0);
        }
        result.rows.push_back(row);
    }

    // least-squares slope of log(err) against log(h), per component
    const std::size_t m = result.rows.size();
    for (int c = 0; c < 4; ++c) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const StudyRow& row : result.rows) {
            const double x = std::log(row.h), y = std::log(row.err[c]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        result.slope[c] = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        for (std::size_t k = 1; k < m; ++k)
            if (!(result.rows[k].err[c] < result.rows[k - 1].err[c])) result.monotone = false;
    }
    return result;
}

void write_study_csv(const StudyResult& study, const std::string& path) {
    static const char* names[4] = {"phi", "v_r", "v_theta", "v_z"};
    std::string out = "n_r,n_z,h,component,error,slope\n";
    for (const StudyRow& row : study.rows) {
        for (int c = 0; c < 4; ++c) {
            out += std::to_string(row.n_r) + "," + std::to_string(row.n_z) + "," +
                   format_double(row.h) + "," + names[c] + "," + format_double(row.err[c]) + "," +
                   format_double(study.slope[c]) + "\n";
        }
    }
    write_text_atomic(path, out);
}

}  // namespace circ
