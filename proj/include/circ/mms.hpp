#pragma once

#include <string>
#include <vector>

#include "circ/timestepper.hpp"

namespace circ {

/// Closed-form solution used to verify the discretization: a Gaussian radial
/// profile with polynomial zeros at both radial boundaries, times a sinusoid
/// in z and a sinusoid in t. Velocity components vanish exactly at the wall
/// and the outer boundary for all t.
struct ManufacturedCase {
    double amp_phi = 5e-3;
    double amp_vr = 5e-3, amp_vt = 5e-3, amp_vz = 5e-3;
    double r0 = 8.0;      // center of the radial profile
    double sigma_r = 3.0; // radial width
    int kz = 1;           // axial mode number
    double omega = 2.0;   // temporal frequency
};

/// Manufactured state sampled on the grid at time t.
State manufactured_state(const ManufacturedCase& mc, const Grid& grid, double t);

/// Exact (analytic) time derivative of the manufactured state at time t.
Tendency manufactured_dt(const ManufacturedCase& mc, const Grid& grid, double t);

/// F(t) = analytic d/dt of the manufactured solution minus the discrete
/// rhs_perturbation applied to the sampled manufactured solution. Adding F
/// to the tendency makes the manufactured solution an exact solution of the
/// semi-discrete system up to time-integration error.
Tendency manufactured_forcing(const ManufacturedCase& mc, double t, const Grid& grid,
                              const BackgroundField& bg, const FlowParams& params);

struct StudyRow {
    int n_r = 0, n_z = 0;
    double h = 0.0;                      // nominal mesh parameter 1/(n_r-1)
    std::array<double, 4> err = {};      // L^2_r error per component at t_end
};

struct StudyResult {
    std::vector<StudyRow> rows;
    std::array<double, 4> slope = {};    // least-squares order per component
    bool monotone = true;                // false marks the study inconclusive
};

/// Evolves the forced system from the manufactured initial data on each grid
/// of the ladder (node counts doubling, >= 3 grids) to t_end and measures
/// L^2_r errors against the analytic solution.
StudyResult convergence_study(const ManufacturedCase& mc, const std::vector<GridSpec>& ladder,
                              const FlowParams& params, double t_end, double cfl_safety = 0.4);

/// CSV table: n_r,n_z,h,component,error,slope.
void write_study_csv(const StudyResult& study, const std::string& path);

}  // namespace circ
