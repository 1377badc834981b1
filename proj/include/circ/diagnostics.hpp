#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "circ/dynamics.hpp"

namespace circ {

/// (int |w|^p r^alpha dr dz)^(1/p), 2-D trapezoid on the stretched grid.
double weighted_lp(const Field& w, double alpha, double p);

/// Discrete inner product (a, b) = int a b r^alpha dr dz.
double inner_r(const Field& a, const Field& b, double alpha);

/// ||w||^2 in the sqrt(r)-weighted Sobolev scale: sum_{j<=k} ||sqrt(r) D^j w||_2^2.
double htilde_sq(const Field& w, int k);
double htilde_sq(const std::vector<const Field*>& ws, int k);

/// One time sample of the weighted norms and energy functionals.
/// All entries are nonnegative; a3 and the dt2 pieces are NaN until enough
/// tendency history exists (first two samples).
struct EnergyReport {
    double e_L2 = 0;     // ||sqrt(rho r) v||^2 + ||sqrt(rho^(g-2) r) phi||^2
    double d_L2 = 0;     // ||v_r/sqrt r||^2 + ||v_th/sqrt r||^2 + ||sqrt r Dv||^2 + ||sqrt r div||^2
    double e_grad = 0;   // ||sqrt r Dv||^2 + ||sqrt r div||^2
    double d_time = 0;   // ||sqrt(rho r) dt v||^2 + ||sqrt(r rho^(g-2)) dt phi||^2
    double e_z1 = 0, e_z2 = 0;        // z-derivative energies
    double diss_z1 = 0, diss_z2 = 0;  // their dissipation integrands
    double e_tD = 0;     // ||sqrt r dt Dv||^2 + ||sqrt r ((1/r) dr(r dt v_r) + dz dt v_z)||^2
    double e_press = 0;  // radial pressure-variable energies
    double diss_press = 0;
    double a1 = 0, a2 = 0, a3 = 0;    // nonlinear duality pairings
    double phi_h2 = 0;   // ||rho^(g-2) phi||^2 in the H~2 scale
    double v_h3 = 0;     // ||v||^2 in the H~3 scale
    double n_inst = 0;   // instantaneous part of N(t)
    double n_integrand = 0;    // integrand of the N(t) time integral
    double thm_integrand = 0;  // ||D(rho^(g-2) phi)||^2_H~1 + ||Dv||^2_H~3
    double dt2 = 0;      // ||sqrt r dt^2 phi||^2 + ||sqrt r dt^2 v||^2
    double bmon = 0;     // boundary contamination monitor
};

struct TimeSeries {
    std::vector<long> step;
    std::vector<double> t, dt;
    std::vector<EnergyReport> reports;
    // running trapezoid integrals, one entry per sample
    std::vector<double> int_d_L2, int_d_time, int_z1, int_z2, int_press;
    std::vector<double> int_n, int_thm, int_a1, int_a2, int_a3;

    std::size_t size() const { return t.size(); }
};

/// Single-sample report; a3 and dt2 flagged absent (NaN), no history.
EnergyReport energy_report(const State& state, const Tendency& tendency,
                           const BackgroundField& bg, const FlowParams& params,
                           bool nonlinear = true);

/// Accumulates a TimeSeries from evolve() samples; keeps the tendency and
/// f/g history needed for the dt^2-bearing quantities and running integrals.
class DiagnosticCollector {
  public:
    DiagnosticCollector(const BackgroundField& bg, const FlowParams& params, bool nonlinear,
                        int monitor_margin, double contamination_threshold);

    void sample(long step, double t, double dt, const State& state, const Tendency& k1);

    const TimeSeries& series() const { return series_; }
    bool contaminated() const { return contaminated_; }

  private:
    const BackgroundField* bg_;
    FlowParams params_;
    bool nonlinear_;
    int margin_;
    double threshold_;
    bool contaminated_ = false;
    TimeSeries series_;

    struct HistSlot {
        double t;
        Tendency tendency;
        Field f;
        std::array<Field, 3> g;
    };
    std::deque<HistSlot> hist_;
};

/// N(t) sample path: instantaneous part plus running integral part.
std::vector<double> n_functional(const TimeSeries& series);

/// Empirical constant of the main stability bound:
/// [sup_t (phi_h2 + v_h3) + final thm integral] / (||phi0||^2_H~2 + ||v0||^2_H~3).
/// NaN for zero initial data.
double theorem_ratio(const TimeSeries& series, const State& initial);

/// Max |component| over the outermost `margin` r-columns (and z rows when
/// Dirichlet); validates the truncation of the unbounded domain.
double boundary_monitor(const State& state, int margin);

/// Semi-discrete residual of the linearized L^2 energy balance:
/// d/dt E + nu1 D1 + nu2 D2 - (2 M0 rho_bar v_theta / r, v_r), which
/// vanishes at the PDE level and converges to 0 at order ~2 on refinement.
double lemma21_balance_residual(const State& state, const BackgroundField& bg,
                                const FlowParams& params);

}  // namespace circ
