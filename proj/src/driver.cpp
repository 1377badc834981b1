#include "circ/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "json.hpp"

namespace circ {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int monitor_margin(const Grid& g) {
    // boundary_monitor requires margin < min(n_r, n_z) / 4
    return std::max(1, std::min(4, std::min(g.nr(), g.nz()) / 4 - 1));
}

double ls_slope(const std::vector<double>& h, const std::vector<double>& e) {
    const std::size_t m = h.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double x = std::log(h[k]), y = std::log(e[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

EvolveOutputs run_evolve(const RunConfig& cfg, bool write_files) {
    cfg.validate();
    Grid grid = build_grid(cfg.grid);
    BackgroundField bg = build_background(grid, cfg.params);
    State initial = cfg.ic.zero ? State(grid) : make_bump_ic(cfg.ic.bump, grid);

    const std::string dir = cfg.outputs.directory;
    if (write_files) fs::create_directories(dir);

    DiagnosticCollector collector(bg, cfg.params, true, monitor_margin(grid),
                                  cfg.outputs.contamination_threshold);
    DiagSink sink = [&](long step, double t, double dt, const State& s, const Tendency& k1) {
        collector.sample(step, t, dt, s, k1);
        if (write_files && cfg.outputs.snapshot_every > 0 &&
            step % cfg.outputs.snapshot_every == 0) {
            char name[32];
            std::snprintf(name, sizeof(name), "snap_%06ld.bin", step);
            write_snapshot(s, t, cfg.params, dir + "/" + name);
        }
    };

    EvolveResult run = evolve(initial, bg, cfg.params, cfg.control, sink, true, nullptr);

    EvolveOutputs out;
    out.series = collector.series();
    out.contaminated = collector.contaminated();
    out.theorem_ratio = theorem_ratio(out.series, initial);
    std::vector<double> n = n_functional(out.series);
    out.n_final = n.back();
    out.n_max = *std::max_element(n.begin(), n.end());
    out.t_final = run.t_final;
    out.steps = run.steps;

    if (write_files) {
        write_timeseries(out.series, dir + "/timeseries.csv");
        json summary{{"theorem_ratio",
                      std::isnan(out.theorem_ratio) ? json(nullptr) : json(out.theorem_ratio)},
                     {"n_max", out.n_max},
                     {"n_final", out.n_final},
                     {"contaminated", out.contaminated},
                     {"steps", out.steps},
                     {"t_final", out.t_final},
                     {"config", json::parse(dump_config(cfg))}};
        write_text_atomic(dir + "/summary.json", summary.dump(2));
    }
    return out;
}

SteadyReport run_steady_check(const FlowParams& params, const GridSpec& base, int levels) {
    if (levels < 2) throw std::invalid_argument("run_steady_check: >= 2 ladder levels required");
    SteadyReport report;
    std::vector<double> hs, errs;
    GridSpec spec = base;
    for (int lv = 0; lv < levels; ++lv) {
        Grid grid = build_grid(spec);
        SteadyRow row{spec.n_r, background_residual(grid, params)};
        report.rows.push_back(row);
        hs.push_back(1.0 / (spec.n_r - 1));
        errs.push_back(row.res.r_momentum);
        spec.n_r *= 2;
        spec.n_z *= 2;
    }
    report.r_order = ls_slope(hs, errs);
    report.pass = report.r_order >= 1.8;
    for (const SteadyRow& row : report.rows)
        if (row.res.continuity > 1e-12 || row.res.theta_momentum > 1e-12) report.pass = false;
    return report;
}

EquivReport run_equivalence(const FlowParams& params, const GridSpec& base, double eps,
                            int levels) {
    if (levels < 2) throw std::invalid_argument("run_equivalence: >= 2 ladder levels required");
    EquivReport report;
    std::vector<double> hs, errs;
    GridSpec spec = base;
    for (int lv = 0; lv < levels; ++lv) {
        Grid grid = build_grid(spec);
        BackgroundField bg = build_background(grid, params);
        BumpSpec bump;
        bump.amplitude = eps;
        State pert = make_bump_ic(bump, grid);

        Field rho(grid), ur = pert.v_r, ut(grid), uz = pert.v_z;
        Field rho0(grid), zero(grid), ut0(grid);
        for (int i = 0; i < grid.nr(); ++i)
            for (int j = 0; j < grid.nz(); ++j) {
                rho(i, j) = bg.rho_bar[i] + pert.phi(i, j);
                ut(i, j) = bg.u_theta_bar[i] + pert.v_theta(i, j);
                rho0(i, j) = bg.rho_bar[i];
                ut0(i, j) = bg.u_theta_bar[i];
            }
        auto full = rhs_primitive(rho, ur, ut, uz, params);
        auto steady = rhs_primitive(rho0, zero, ut0, zero, params);
        Tendency p = rhs_perturbation(pert, bg, params, true);

        double total = 0.0;
        for (int c = 0; c < 4; ++c) {
            Field diff(grid);
            const Field& pc = p.component(c);
            for (std::size_t n = 0; n < diff.v.size(); ++n)
                diff.v[n] = full[c].v[n] - steady[c].v[n] - pc.v[n];
            const double e = weighted_lp(diff, 1.0, 2.0);
            total += e * e;
        }
        EquivRow row{spec.n_r, std::sqrt(total)};
        report.rows.push_back(row);
        hs.push_back(1.0 / (spec.n_r - 1));
        errs.push_back(row.resid);
        spec.n_r *= 2;
        spec.n_z *= 2;
    }
    report.order = ls_slope(hs, errs);
    report.pass = report.order >= 1.8;
    return report;
}

std::vector<SweepEntry> run_sweep(const RunConfig& cfg, bool write_files) {
    if (cfg.epsilons.empty()) throw std::invalid_argument("run_sweep: empty epsilon list");
    std::vector<SweepEntry> out;
    for (double eps : cfg.epsilons) {
        RunConfig c = cfg;
        c.mode = RunMode::evolve;
        c.ic.zero = false;
        c.ic.bump.amplitude = eps;
        if (write_files) c.outputs.directory = cfg.outputs.directory + "/eps_" + format_double(eps);
        EvolveOutputs run = run_evolve(c, write_files);
        SweepEntry e;
        e.eps = eps;
        e.n_final = run.n_final;
        e.n_over_eps2 = run.n_final / (eps * eps);
        e.theorem_ratio = run.theorem_ratio;
        const double n32 = std::pow(run.n_final, 1.5);
        e.a_over_n32 = {std::abs(run.series.int_a1.back()) / n32,
                        std::abs(run.series.int_a2.back()) / n32,
                        std::abs(run.series.int_a3.back()) / n32};
        e.contaminated = run.contaminated;
        out.push_back(e);
    }
    return out;
}

}  // namespace circ
