// Timing comparison of the OpenMP operator kernels against the serial
// reference path, plus a bitwise agreement check on random data.
#include <chrono>
#include <cstdio>
#include <random>

#include "circ/background.hpp"
#include "circ/dynamics.hpp"
#include "circ/ops.hpp"

using namespace circ;
using clk = std::chrono::steady_clock;

namespace {

double ms_since(clk::time_point t0) {
    return std::chrono::duration<double, std::milli>(clk::now() - t0).count();
}

template <typename F>
double time_loop(int reps, F&& body) {
    body();  // warm up
    auto t0 = clk::now();
    for (int k = 0; k < reps; ++k) body();
    return ms_since(t0) / reps;
}

}  // namespace

int main(int argc, char** argv) {
    int n = 512;
    int reps = 20;
    if (argc > 1) n = std::atoi(argv[1]);
    if (argc > 2) reps = std::atoi(argv[2]);

    GridSpec spec;
    spec.n_r = spec.n_z = n;
    Grid grid = build_grid(spec);
    Field f(grid), out_p(grid), out_s(grid);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& x : f.v) x = dist(rng);

    struct Entry {
        const char* name;
        void (*par)(const Field&, Field&);
        void (*ser)(const Field&, Field&);
    };
    const Entry entries[] = {
        {"d_r", ops::d_r, ops::serial::d_r},
        {"d_z", ops::d_z, ops::serial::d_z},
        {"d_rr", ops::d_rr, ops::serial::d_rr},
        {"d_zz", ops::d_zz, ops::serial::d_zz},
        {"visc_swirl", ops::visc_swirl, ops::serial::visc_swirl},
        {"visc_axial", ops::visc_axial, ops::serial::visc_axial},
    };

    std::printf("grid %dx%d, %d reps\n", n, n, reps);
    std::printf("%-12s %12s %12s %8s %s\n", "kernel", "omp (ms)", "serial (ms)", "speedup",
                "bitwise");
    bool all_match = true;
    for (const Entry& e : entries) {
        const double tp = time_loop(reps, [&] { e.par(f, out_p); });
        const double ts = time_loop(reps, [&] { e.ser(f, out_s); });
        const bool same = out_p.v == out_s.v;
        all_match = all_match && same;
        std::printf("%-12s %12.3f %12.3f %8.2f %s\n", e.name, tp, ts, ts / tp,
                    same ? "yes" : "NO");
    }

    // cyl_div takes two inputs; time it separately
    Field f2(grid);
    for (double& x : f2.v) x = dist(rng);
    const double tp = time_loop(reps, [&] { ops::cyl_div(f, f2, out_p); });
    const double ts = time_loop(reps, [&] { ops::serial::cyl_div(f, f2, out_s); });
    const bool same = out_p.v == out_s.v;
    all_match = all_match && same;
    std::printf("%-12s %12.3f %12.3f %8.2f %s\n", "cyl_div", tp, ts, ts / tp, same ? "yes" : "NO");

    if (!all_match) {
        std::printf("mismatch between parallel and serial kernels\n");
        return 1;
    }
    return 0;
}
