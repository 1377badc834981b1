#include "circ/grid.hpp"

#include <cmath>

namespace circ {

Grid build_grid(const GridSpec& spec) {
    spec.validate();
    Grid g;
    g.spec = spec;
    const int nr = spec.n_r, nz = spec.n_z;
    g.dxi = 1.0 / (nr - 1);
    g.r.resize(nr);
    g.dr_dxi.resize(nr);
    const double span = spec.r_max - 1.0;
    if (spec.beta == 0.0) {
        for (int i = 0; i < nr; ++i) {
            const double xi = static_cast<double>(i) / (nr - 1);
            g.r[i] = 1.0 + span * xi;
            g.dr_dxi[i] = span;
        }
    } else {
        const double b = spec.beta;
        const double denom = std::expm1(b);
        for (int i = 0; i < nr; ++i) {
            const double xi = static_cast<double>(i) / (nr - 1);
            g.r[i] = 1.0 + span * std::expm1(b * xi) / denom;
            g.dr_dxi[i] = span * b * std::exp(b * xi) / denom;
        }
    }
    // pin the endpoints exactly
    g.r[0] = 1.0;
    g.r[nr - 1] = spec.r_max;

    g.z.resize(nz);
    if (spec.z_boundary == ZBoundary::periodic) {
        g.dz = (spec.z_max - spec.z_min) / nz;  // z_max aliases z_min
        for (int j = 0; j < nz; ++j) g.z[j] = spec.z_min + j * g.dz;
    } else {
        g.dz = (spec.z_max - spec.z_min) / (nz - 1);
        for (int j = 0; j < nz; ++j) g.z[j] = spec.z_min + j * g.dz;
        g.z[nz - 1] = spec.z_max;
    }

    // trapezoid quadrature in the mapped coordinate, metric folded in
    g.quad_r.resize(nr);
    for (int i = 0; i < nr; ++i) {
        double w = (i == 0 || i == nr - 1) ? 0.5 : 1.0;
        g.quad_r[i] = w * g.dr_dxi[i] * g.dxi;
    }
    g.quad_z.resize(nz);
    for (int j = 0; j < nz; ++j) {
        double w = 1.0;
        if (spec.z_boundary == ZBoundary::dirichlet && (j == 0 || j == nz - 1)) w = 0.5;
        g.quad_z[j] = w * g.dz;
    }
    return g;
}

}  // namespace circ
