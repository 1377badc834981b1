#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace circ {

enum class ZBoundary { periodic, dirichlet };

/// Parameters of the stretched structured mesh on [1, r_max] x [z_min, z_max].
struct GridSpec {
    int n_r = 128;           // node count in r, >= 16
    int n_z = 128;           // node count in z, >= 16
    double r_max = 21.0;     // outer radius, > 1
    double z_min = -10.0;
    double z_max = 10.0;
    double beta = 0.0;       // radial stretching strength, >= 0
    ZBoundary z_boundary = ZBoundary::periodic;

    void validate() const {
        if (n_r < 16 || n_z < 16) throw std::invalid_argument("GridSpec: n_r, n_z >= 16 required");
        if (!(r_max > 1.0)) throw std::invalid_argument("GridSpec: r_max > 1 required");
        if (!(z_max > z_min)) throw std::invalid_argument("GridSpec: z_max > z_min required");
        if (!(beta >= 0.0)) throw std::invalid_argument("GridSpec: beta >= 0 required");
    }

    bool operator==(const GridSpec&) const = default;
};

/// Structured mesh: exponential radial map r(xi) with analytic metric,
/// uniform axial spacing. Radial derivatives are taken in the mapped
/// coordinate xi in [0,1]; dr_dxi carries the metric per node.
struct Grid {
    GridSpec spec;
    std::vector<double> r;        // radius per i-index, r[0] == 1, r[n_r-1] == r_max
    std::vector<double> z;        // axial coordinate per j-index
    std::vector<double> dr_dxi;   // radial metric per i-index, > 0
    double dxi = 0.0;             // uniform spacing of the mapped coordinate
    double dz = 0.0;              // uniform axial spacing
    std::vector<double> quad_r;   // dr quadrature weight per i (metric * trapezoid)
    std::vector<double> quad_z;   // dz quadrature weight per j

    int nr() const { return spec.n_r; }
    int nz() const { return spec.n_z; }
    std::size_t size() const { return static_cast<std::size_t>(spec.n_r) * spec.n_z; }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * spec.n_z + j; }
    bool periodic_z() const { return spec.z_boundary == ZBoundary::periodic; }

    /// Local radial spacing at node i (metric times dxi).
    double dr_local(int i) const { return dr_dxi[i] * dxi; }
};

Grid build_grid(const GridSpec& spec);

/// One scalar per (i,j) node, row-major with contiguous j.
/// References the grid it lives on; the grid must outlive the field.
struct Field {
    const Grid* g = nullptr;
    std::vector<double> v;

    Field() = default;
    explicit Field(const Grid& grid) : g(&grid), v(grid.size(), 0.0) {}

    double& operator()(int i, int j) { return v[g->idx(i, j)]; }
    double operator()(int i, int j) const { return v[g->idx(i, j)]; }

    void fill(double x) { std::fill(v.begin(), v.end(), x); }

    bool all_finite() const {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    }
};

inline void require_same_grid(const Field& a, const Field& b, const char* what) {
    if (a.g == nullptr || b.g == nullptr || (a.g != b.g && !(a.g->spec == b.g->spec)))
        throw std::invalid_argument(std::string(what) + ": fields live on different grids");
}

}  // namespace circ
