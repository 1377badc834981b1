#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "circ/driver.hpp"
#include "circ/mms.hpp"

namespace {

// exit codes: 0 pass, 1 threshold fail, 2 usage/config error, 3 runtime failure
constexpr int kPass = 0, kFail = 1, kUsage = 2, kRuntime = 3;

circ::RunConfig load_config(const std::string& path, bool demo) {
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open config file " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return circ::parse_config(ss.str());
    }
    if (demo) return circ::RunConfig{};  // documented defaults
    throw std::invalid_argument("either --config <path> or --demo is required");
}

int cmd_steady(const circ::RunConfig& cfg) {
    circ::SteadyReport report = circ::run_steady_check(cfg.params, cfg.grid, 3);
    std::printf("%8s %14s %14s %14s\n", "n", "continuity", "theta_mom", "r_mom");
    for (const auto& row : report.rows)
        std::printf("%8d %14.6e %14.6e %14.6e\n", row.n, row.res.continuity,
                    row.res.theta_momentum, row.res.r_momentum);
    std::printf("r-momentum order: %.3f  ->  %s\n", report.r_order,
                report.pass ? "PASS" : "FAIL");
    return report.pass ? kPass : kFail;
}

int cmd_evolve(const circ::RunConfig& cfg) {
    circ::EvolveOutputs out = circ::run_evolve(cfg, true);
    std::printf("steps=%ld t_final=%.6g N_final=%.6e N_max=%.6e theorem_ratio=%.6g %s\n",
                out.steps, out.t_final, out.n_final, out.n_max, out.theorem_ratio,
                out.contaminated ? "CONTAMINATED" : "clean");
    std::printf("outputs in %s\n", cfg.outputs.directory.c_str());
    return kPass;
}

int cmd_sweep(const circ::RunConfig& cfg) {
    if (cfg.epsilons.empty()) throw std::invalid_argument("sweep: empty epsilon list");
    auto entries = circ::run_sweep(cfg, true);
    std::printf("%12s %14s %14s %14s %12s %12s %12s %6s\n", "eps", "N(T)", "N/eps^2",
                "thm_ratio", "A1/N^1.5", "A2/N^1.5", "A3/N^1.5", "flag");
    for (const auto& e : entries)
        std::printf("%12.3e %14.6e %14.6e %14.6g %12.4e %12.4e %12.4e %6s\n", e.eps, e.n_final,
                    e.n_over_eps2, e.theorem_ratio, e.a_over_n32[0], e.a_over_n32[1],
                    e.a_over_n32[2], e.contaminated ? "DIRTY" : "ok");
    double nmin = entries[0].n_over_eps2, nmax = nmin;
    for (const auto& e : entries) {
        nmin = std::min(nmin, e.n_over_eps2);
        nmax = std::max(nmax, e.n_over_eps2);
    }
    bool pass = nmax <= 1.15 * nmin;
    for (int i = 0; i < 3; ++i) {
        double amin = entries[0].a_over_n32[i], amax = amin;
        for (const auto& e : entries) {
            amin = std::min(amin, e.a_over_n32[i]);
            amax = std::max(amax, e.a_over_n32[i]);
        }
        if (amax > 2.0 * amin) pass = false;
    }
    for (const auto& e : entries)
        if (e.contaminated) pass = false;
    std::printf("spread checks: %s\n", pass ? "PASS" : "FAIL");
    return pass ? kPass : kFail;
}

int cmd_convergence(const circ::RunConfig& cfg) {
    std::vector<circ::GridSpec> ladder;
    for (int n : {32, 64, 128}) {
        circ::GridSpec g = cfg.grid;
        g.n_r = g.n_z = n;
        ladder.push_back(g);
    }
    circ::ManufacturedCase mc;
    circ::StudyResult study =
        circ::convergence_study(mc, ladder, cfg.params, 0.5, cfg.control.cfl_safety);
    std::filesystem::create_directories(cfg.outputs.directory);
    circ::write_study_csv(study, cfg.outputs.directory + "/study.csv");
    static const char* names[4] = {"phi", "v_r", "v_theta", "v_z"};
    bool pass = study.monotone;
    for (int c = 0; c < 4; ++c) {
        std::printf("%-8s slope %.3f\n", names[c], study.slope[c]);
        if (study.slope[c] < 1.85) pass = false;
    }
    if (!study.monotone) std::printf("errors not monotone: study inconclusive\n");
    std::printf("convergence: %s\n", pass ? "PASS" : "FAIL");
    return pass ? kPass : kFail;
}

int cmd_residual(const circ::RunConfig& cfg) {
    circ::EquivReport report = circ::run_equivalence(cfg.params, cfg.grid, 1e-2, 3);
    std::printf("%8s %14s\n", "n", "residual");
    for (const auto& row : report.rows) std::printf("%8d %14.6e\n", row.n, row.resid);
    std::printf("equivalence order: %.3f  ->  %s\n", report.order,
                report.pass ? "PASS" : "FAIL");
    return report.pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"viscous cylindrical circulatory flow laboratory"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir;
    bool demo = false;
    int threads = 0;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_flag("--demo", demo, "use built-in demo defaults instead of --config");
    app.add_option("--threads", threads, "OpenMP thread count (default: all cores)");
    app.add_option("--out", out_dir, "override output directory");

    auto* steady = app.add_subcommand("steady-check", "background residual refinement ladder");
    auto* evolve = app.add_subcommand("evolve", "full perturbation run with diagnostics");
    auto* sweep = app.add_subcommand("sweep", "amplitude sweep with scaling checks");
    auto* conv = app.add_subcommand("convergence", "manufactured-solution convergence study");
    auto* resid = app.add_subcommand("residual", "primitive/perturbation equivalence ladder");

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        circ::RunConfig cfg = load_config(config_path, demo);
        if (!out_dir.empty()) cfg.outputs.directory = out_dir;
        if (steady->parsed()) return cmd_steady(cfg);
        if (evolve->parsed()) return cmd_evolve(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (conv->parsed()) return cmd_convergence(cfg);
        if (resid->parsed()) return cmd_residual(cfg);
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime failure: %s\n", e.what());
        return kRuntime;
    }
}
