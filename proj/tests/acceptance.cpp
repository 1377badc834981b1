// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "circ/driver.hpp"
#include "circ/mms.hpp"

using namespace circ;

namespace {

int failures = 0;

class Criterion {
  public:
    Criterion(int id, const char* what, double budget_s)
        : id_(id), what_(what), budget_(budget_s), start_(std::chrono::steady_clock::now()) {}

    void finish(bool ok, const std::string& detail = "") {
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (elapsed > budget_) {
            ok = false;
            std::printf("FAIL %d: %s — exceeded %.0fs budget (%.1fs)\n", id_, what_, budget_,
                        elapsed);
            ++failures;
            return;
        }
        std::printf("%s %d: %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", id_, what_, elapsed,
                    detail.empty() ? "" : " — ", detail.c_str());
        if (!ok) ++failures;
    }

  private:
    int id_;
    const char* what_;
    double budget_;
    std::chrono::steady_clock::time_point start_;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

GridSpec default_grid(int n) {
    GridSpec g;
    g.n_r = n;
    g.n_z = n;
    return g;
}

double spread(const std::vector<double>& xs) {  // max/min ratio
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    return *hi / *lo;
}

void criterion1() {
    Criterion c(1, "background identities at 10^4 radii, 5 parameter sets", 1.0);
    bool ok = true;
    FlowParams sets[5];
    sets[0].gamma = 1.4;
    sets[1].gamma = 2.0;
    sets[2].gamma = 3.0;
    sets[3].gamma = 1.4;
    sets[3].A = 2.5;
    sets[3].M0 = 0.7;
    sets[4].gamma = 2.2;
    sets[4].rho_bar0 = 1.5;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(1.0, 100.0);
    for (const FlowParams& p : sets) {
        const double target = p.M0 * p.M0 / (p.A * p.gamma);
        for (int k = 0; k < 10000 && ok; ++k) {
            const double r = dist(rng);
            const double rho = bar_rho(r, p);
            const double inv = r * r * r * bar_rho_prime(r, p) * pow_gm2(rho, p.gamma);
            if (std::abs(inv - target) > 1e-12 * target) ok = false;
            const double lhs =
                p.A * p.gamma * std::pow(rho, p.gamma - 1.0) * bar_rho_prime(r, p);
            const double rhs = rho * bar_utheta(r, p) * bar_utheta(r, p) / r;
            if (std::abs(lhs - rhs) > 1e-12 * std::abs(rhs)) ok = false;
        }
    }
    c.finish(ok);
}

void criterion2() {
    Criterion c(2, "zero perturbation stays bitwise zero for 1000 steps at 128^2", 60.0);
    Grid g = build_grid(default_grid(128));
    FlowParams p;
    BackgroundField bg = build_background(g, p);
    State s(g);
    const double dt = stable_dt(s, bg, g, p, 0.4);
    double t = 0.0;
    bool ok = true;
    try {
        for (int n = 0; n < 1000; ++n) {
            s = rk4_step(s, t, dt, bg, p);
            t += dt;
        }
    } catch (const std::exception&) {
        ok = false;
    }
    for (int k = 0; k < 4 && ok; ++k)
        for (double x : s.component(k).v)
            if (x != 0.0) {
                ok = false;
                break;
            }
    c.finish(ok);
}

void criterion3() {
    Criterion c(3, "steady residual ladder 64/128/256: r-order >= 1.9, rest exact", 120.0);
    FlowParams p;
    SteadyReport rep = run_steady_check(p, default_grid(64), 3);
    bool ok = rep.r_order >= 1.9;
    for (const SteadyRow& row : rep.rows)
        if (row.res.continuity > 1e-12 || row.res.theta_momentum > 1e-12) ok = false;
    char buf[64];
    std::snprintf(buf, sizeof buf, "r-order %.2f", rep.r_order);
    c.finish(ok, buf);
}

void criterion4() {
    Criterion c(4, "perturbation vs primitive formulation agree at order >= 1.9", 120.0);
    FlowParams p;
    EquivReport rep = run_equivalence(p, default_grid(64), 1e-2, 3);
    char buf[64];
    std::snprintf(buf, sizeof buf, "order %.2f", rep.order);
    c.finish(rep.order >= 1.9, buf);
}

void criterion5() {
    Criterion c(5, "manufactured-solution orders 2.0 +/- 0.15 on 32/64/128", 300.0);
    FlowParams p;
    ManufacturedCase mc;
    std::vector<GridSpec> ladder = {default_grid(32), default_grid(64), default_grid(128)};
    StudyResult study = convergence_study(mc, ladder, p, 0.5);
    bool ok = study.monotone;
    std::string detail = "slopes";
    for (double s : study.slope) {
        if (std::abs(s - 2.0) > 0.15) ok = false;
        char buf[16];
        std::snprintf(buf, sizeof buf, " %.2f", s);
        detail += buf;
    }
    c.finish(ok, detail);
}

std::vector<SweepEntry> run_default_sweep() {
    RunConfig cfg;
    cfg.mode = RunMode::sweep;
    cfg.control.t_end = 5.0;
    return run_sweep(cfg, false);
}

void criterion6() {
    Criterion c(6, "amplitude sweep at defaults: regularity and scaling laws", 900.0);
    std::vector<SweepEntry> sweep;
    try {
        sweep = run_default_sweep();
    } catch (const std::exception& e) {
        c.finish(false, e.what());
        return;
    }
    bool ok = sweep.size() == 3;
    std::vector<double> n_ratio, thm;
    std::vector<double> a_ratio[3];
    for (const SweepEntry& e : sweep) {
        if (e.contaminated || !std::isfinite(e.n_final) || !std::isfinite(e.theorem_ratio))
            ok = false;
        n_ratio.push_back(e.n_over_eps2);
        thm.push_back(e.theorem_ratio);
        for (int i = 0; i < 3; ++i) {
            if (!std::isfinite(e.a_over_n32[i])) ok = false;
            a_ratio[i].push_back(e.a_over_n32[i]);
        }
    }
    char buf[128];
    if (ok) {
        const double ns = spread(n_ratio), ts = spread(thm);
        const double as = std::max({spread(a_ratio[0]), spread(a_ratio[1]), spread(a_ratio[2])});
        if (ns > 1.15 || ts > 1.5 || as > 2.0) ok = false;
        std::snprintf(buf, sizeof buf, "N/eps^2 spread %.3f, ratio spread %.3f, A spread %.3f",
                      ns, ts, as);
        c.finish(ok, buf);
    } else {
        c.finish(false, "non-finite or contaminated entry");
    }
}

void criterion7() {
    Criterion c(7, "linearized energy balance: residual order >= 1.9, dissipation monotone",
                180.0);
    FlowParams p;
    BumpSpec bump;
    bump.amplitude = 1e-2;
    std::vector<double> hs, rs;
    for (int n : {64, 128, 256}) {
        Grid g = build_grid(default_grid(n));
        BackgroundField bg = build_background(g, p);
        State s = make_bump_ic(bump, g);
        hs.push_back(std::log(1.0 / (n - 1.0)));
        rs.push_back(std::log(std::abs(lemma21_balance_residual(s, bg, p))));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < hs.size(); ++k) {
        sx += hs[k];
        sy += rs[k];
        sxx += hs[k] * hs[k];
        sxy += hs[k] * rs[k];
    }
    const double m = hs.size();
    const double order = (m * sxy - sx * sy) / (m * sxx - sx * sx);

    RunConfig cfg;
    cfg.control.t_end = 0.5;
    cfg.ic.bump.amplitude = 1e-3;
    Grid g = build_grid(cfg.grid);
    BackgroundField bg = build_background(g, p);
    State ic = make_bump_ic(cfg.ic.bump, g);
    DiagnosticCollector coll(bg, p, false, 2, cfg.outputs.contamination_threshold);
    auto sink = [&](long step, double t, double dt, const State& s, const Tendency& k1) {
        coll.sample(step, t, dt, s, k1);
    };
    evolve(ic, bg, p, cfg.control, sink, false);
    bool monotone = true;
    const TimeSeries& ts = coll.series();
    for (std::size_t k = 1; k < ts.size(); ++k)
        if (ts.int_d_L2[k] < ts.int_d_L2[k - 1]) monotone = false;
    char buf[64];
    std::snprintf(buf, sizeof buf, "order %.2f, monotone %s", order, monotone ? "yes" : "no");
    c.finish(order >= 1.9 && monotone, buf);
}

void criterion8() {
    Criterion c(8, "thread counts 1 and 4 give bitwise identical time series", 600.0);
    auto csv_for = [&](int threads, bool zero_ic) {
        omp_set_num_threads(threads);
        RunConfig cfg;
        cfg.control.t_end = zero_ic ? 0.5 : 5.0;
        cfg.ic.zero = zero_ic;
        cfg.ic.bump.amplitude = 1e-2;
        cfg.outputs.directory =
            std::string("/tmp/acc8_") + (zero_ic ? "z" : "b") + std::to_string(threads);
        run_evolve(cfg, true);
        return slurp(cfg.outputs.directory + "/timeseries.csv");
    };
    bool ok = true;
    for (bool zero_ic : {true, false}) {
        const std::string a = csv_for(1, zero_ic);
        const std::string b = csv_for(4, zero_ic);
        if (a.empty() || a != b) ok = false;
    }
    omp_set_num_threads(omp_get_num_procs());
    c.finish(ok);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures ? 1 : 0;
}
