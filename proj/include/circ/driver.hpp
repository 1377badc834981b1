#pragma once

#include "circ/io.hpp"

namespace circ {

struct EvolveOutputs {
    TimeSeries series;
    bool contaminated = false;
    double theorem_ratio = 0.0;  // NaN for zero initial data
    double n_final = 0.0;        // N at the final sample
    double n_max = 0.0;
    double t_final = 0.0;
    long steps = 0;
};

/// Full evolve run from a config: builds grid/background/IC, collects
/// diagnostics at the configured cadence and, when write_files is set, emits
/// timeseries.csv, summary.json and optional snapshots into the output
/// directory (created if absent).
EvolveOutputs run_evolve(const RunConfig& cfg, bool write_files = true);

struct SteadyRow {
    int n = 0;
    BackgroundResidual res;
};

struct SteadyReport {
    std::vector<SteadyRow> rows;
    double r_order = 0.0;  // least-squares order of the r-momentum residual
    bool pass = false;
};

/// Background residual norms on a refinement ladder (node counts doubling).
/// Pass: continuity and theta-momentum <= 1e-12 everywhere, r-order >= 1.8.
SteadyReport run_steady_check(const FlowParams& params, const GridSpec& base, int levels = 3);

struct EquivRow {
    int n = 0;
    double resid = 0.0;
};

struct EquivReport {
    std::vector<EquivRow> rows;
    double order = 0.0;
    bool pass = false;
};

/// || rhs_prim(bg + pert) - rhs_prim(bg) - rhs_pert(pert) ||_{L^2_r} on a
/// ladder, with a fixed smooth bump perturbation of amplitude eps.
/// Pass: order >= 1.8.
EquivReport run_equivalence(const FlowParams& params, const GridSpec& base, double eps = 1e-2,
                            int levels = 3);

struct SweepEntry {
    double eps = 0.0;
    double n_final = 0.0;
    double n_over_eps2 = 0.0;
    double theorem_ratio = 0.0;
    std::array<double, 3> a_over_n32 = {};  // |int A_i| / N(T)^(3/2)
    bool contaminated = false;
};

/// Runs evolve per epsilon (same bump shape, scaled amplitude).
std::vector<SweepEntry> run_sweep(const RunConfig& cfg, bool write_files = false);

}  // namespace circ
