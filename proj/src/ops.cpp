#include "circ/ops.hpp"

namespace circ {
namespace ops {

namespace {

template <class F>
void for_rows(int nr, bool par, F&& body) {
    if (par) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < nr; ++i) body(i);
    } else {
        for (int i = 0; i < nr; ++i) body(i);
    }
}

// One-sided stencils are written in difference form so constant fields are
// annihilated exactly in floating point, whatever their value.

// second-order one-sided first derivative, a nearest to the boundary
inline double oneside1(double a, double b, double c, double h2) {
    return (4.0 * (b - a) - (c - a)) / h2;
}

// second-order one-sided second derivative, a nearest to the boundary
inline double oneside2(double a, double b, double c, double d, double hh) {
    return (-2.0 * (b - a) + 3.0 * (c - b) - (d - c)) / hh;
}

// derivative in the mapped radial coordinate xi at node (i, j)
inline double dxi1(const Field& f, int i, int j, int nr, double h) {
    if (i == 0) return oneside1(f(0, j), f(1, j), f(2, j), 2.0 * h);
    if (i == nr - 1) return -oneside1(f(nr - 1, j), f(nr - 2, j), f(nr - 3, j), 2.0 * h);
    return (f(i + 1, j) - f(i - 1, j)) / (2.0 * h);
}

inline double dxi2(const Field& f, int i, int j, int nr, double h) {
    if (i == 0) return oneside2(f(0, j), f(1, j), f(2, j), f(3, j), h * h);
    if (i == nr - 1)
        return oneside2(f(nr - 1, j), f(nr - 2, j), f(nr - 3, j), f(nr - 4, j), h * h);
    return (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / (h * h);
}

void d_r_impl(const Field& f, Field& out, bool par) {
    require_same_grid(f, out, "d_r");
    const Grid& g = *f.g;
    const int nr = g.nr(), nz = g.nz();
    for_rows(nr, par, [&](int i) {
        const double inv = 1.0 / g.dr_dxi[i];
        for (int j = 0; j < nz; ++j) out(i, j) = dxi1(f, i, j, nr, g.dxi) * inv;
    });
}

void d_rr_impl(const Field& f, Field& out, bool par) {
    require_same_grid(f, out, "d_rr");
    const Grid& g = *f.g;
    const int nr = g.nr(), nz = g.nz();
    const double beta = g.spec.beta;
    for_rows(nr, par, [&](int i) {
        const double inv2 = 1.0 / (g.dr_dxi[i] * g.dr_dxi[i]);
        for (int j = 0; j < nz; ++j) {
            const double fxx = dxi2(f, i, j, nr, g.dxi);
            if (beta == 0.0) {
                out(i, j) = fxx * inv2;
            } else {
                // exponential map: r'' = beta r', so d_rr = (f_xixi - beta f_xi) / r'^2
                const double fx = dxi1(f, i, j, nr, g.dxi);
                out(i, j) = (fxx - beta * fx) * inv2;
            }
        }
    });
}

void d_z_impl(const Field& f, Field& out, bool par) {
    require_same_grid(f, out, "d_z");
    const Grid& g = *f.g;
    const int nr = g.nr(), nz = g.nz();
    const double h2 = 2.0 * g.dz;
    const bool per = g.periodic_z();
    for_rows(nr, par, [&](int i) {
        if (per) {
            out(i, 0) = (f(i, 1) - f(i, nz - 1)) / h2;
            for (int j = 1; j < nz - 1; ++j) out(i, j) = (f(i, j + 1) - f(i, j - 1)) / h2;
            out(i, nz - 1) = (f(i, 0) - f(i, nz - 2)) / h2;
        } else {
            out(i, 0) = oneside1(f(i, 0), f(i, 1), f(i, 2), h2);
            for (int j = 1; j < nz - 1; ++j) out(i, j) = (f(i, j + 1) - f(i, j - 1)) / h2;
            out(i, nz - 1) = -oneside1(f(i, nz - 1), f(i, nz - 2), f(i, nz - 3), h2);
        }
    });
}

void d_zz_impl(const Field& f, Field& out, bool par) {
    require_same_grid(f, out, "d_zz");
    const Grid& g = *f.g;
    const int nr = g.nr(), nz = g.nz();
    const double h2 = g.dz * g.dz;
    const bool per = g.periodic_z();
    for_rows(nr, par, [&](int i) {
        if (per) {
            out(i, 0) = (f(i, 1) - 2.0 * f(i, 0) + f(i, nz - 1)) / h2;
            for (int j = 1; j < nz - 1; ++j)
                out(i, j) = (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / h2;
            out(i, nz - 1) = (f(i, 0) - 2.0 * f(i, nz - 1) + f(i, nz - 2)) / h2;
        } else {
            out(i, 0) = oneside2(f(i, 0), f(i, 1), f(i, 2), f(i, 3), h2);
            for (int j = 1; j < nz - 1; ++j)
                out(i, j) = (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / h2;
            out(i, nz - 1) =
                oneside2(f(i, nz - 1), f(i, nz - 2), f(i, nz - 3), f(i, nz - 4), h2);
        }
    });
}

void cyl_div_impl(const Field& v_r, const Field& v_z, Field& out, bool par) {
    require_same_grid(v_r, v_z, "cyl_div");
    require_same_grid(v_r, out, "cyl_div");
    const Grid& g = *v_r.g;
    Field a(g), b(g);
    d_r_impl(v_r, a, par);
    d_z_impl(v_z, b, par);
    const int nr = g.nr(), nz = g.nz();
    for_rows(nr, par, [&](int i) {
        const double invr = 1.0 / g.r[i];
        for (int j = 0; j < nz; ++j) out(i, j) = a(i, j) + v_r(i, j) * invr + b(i, j);
    });
}

void visc_swirl_impl(const Field& w, Field& out, bool par) {
    require_same_grid(w, out, "visc_swirl");
    const Grid& g = *w.g;
    Field a(g), b(g), c(g);
    d_rr_impl(w, a, par);
    d_r_impl(w, b, par);
    d_zz_impl(w, c, par);
    const int nr = g.nr(), nz = g.nz();
    for_rows(nr, par, [&](int i) {
        const double invr = 1.0 / g.r[i];
        const double invr2 = invr * invr;
        for (int j = 0; j < nz; ++j)
            out(i, j) = a(i, j) + b(i, j) * invr - w(i, j) * invr2 + c(i, j);
    });
}

void visc_axial_impl(const Field& w, Field& out, bool par) {
    require_same_grid(w, out, "visc_axial");
    const Grid& g = *w.g;
    Field a(g), b(g), c(g);
    d_rr_impl(w, a, par);
    d_r_impl(w, b, par);
    d_zz_impl(w, c, par);
    const int nr = g.nr(), nz = g.nz();
    for_rows(nr, par, [&](int i) {
        const double invr = 1.0 / g.r[i];
        for (int j = 0; j < nz; ++j) out(i, j) = a(i, j) + b(i, j) * invr + c(i, j);
    });
}

}  // namespace

void d_r(const Field& f, Field& out) { d_r_impl(f, out, true); }
void d_z(const Field& f, Field& out) { d_z_impl(f, out, true); }
void d_rr(const Field& f, Field& out) { d_rr_impl(f, out, true); }
void d_zz(const Field& f, Field& out) { d_zz_impl(f, out, true); }
void cyl_div(const Field& v_r, const Field& v_z, Field& out) { cyl_div_impl(v_r, v_z, out, true); }
void visc_swirl(const Field& w, Field& out) { visc_swirl_impl(w, out, true); }
void visc_axial(const Field& w, Field& out) { visc_axial_impl(w, out, true); }

namespace serial {
void d_r(const Field& f, Field& out) { d_r_impl(f, out, false); }
void d_z(const Field& f, Field& out) { d_z_impl(f, out, false); }
void d_rr(const Field& f, Field& out) { d_rr_impl(f, out, false); }
void d_zz(const Field& f, Field& out) { d_zz_impl(f, out, false); }
void cyl_div(const Field& v_r, const Field& v_z, Field& out) { cyl_div_impl(v_r, v_z, out, false); }
void visc_swirl(const Field& w, Field& out) { visc_swirl_impl(w, out, false); }
void visc_axial(const Field& w, Field& out) { visc_axial_impl(w, out, false); }
}  // namespace serial

}  // namespace ops
}  // namespace circ
