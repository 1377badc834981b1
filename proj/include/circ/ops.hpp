#pragma once

#include "circ/grid.hpp"

namespace circ {

/// Cylindrical differential operators, second-order accurate.
/// Radial derivatives act in the mapped coordinate xi and compose with the
/// analytic metric; boundaries use one-sided stencils of the same order.
/// z derivatives wrap around when the grid is periodic in z.
///
/// The parallel kernels live in namespace ops (OpenMP over radial rows);
/// namespace ops::serial keeps a plain-loop reference used by tests and the
/// benchmark. Both paths are elementwise identical by construction.
namespace ops {

void d_r(const Field& f, Field& out);
void d_z(const Field& f, Field& out);
void d_rr(const Field& f, Field& out);
void d_zz(const Field& f, Field& out);

/// (1/r) d_r(r v_r) + d_z v_z, expanded as d_r v_r + v_r / r + d_z v_z.
void cyl_div(const Field& v_r, const Field& v_z, Field& out);

/// d_r((1/r) d_r(r w)) + d_zz w, expanded as d_rr w + d_r w / r - w / r^2 + d_zz w.
void visc_swirl(const Field& w, Field& out);

/// d_rr w + (1/r) d_r w + d_zz w.
void visc_axial(const Field& w, Field& out);

inline Field d_r(const Field& f) { Field o(*f.g); d_r(f, o); return o; }
inline Field d_z(const Field& f) { Field o(*f.g); d_z(f, o); return o; }
inline Field d_rr(const Field& f) { Field o(*f.g); d_rr(f, o); return o; }
inline Field d_zz(const Field& f) { Field o(*f.g); d_zz(f, o); return o; }
inline Field cyl_div(const Field& v_r, const Field& v_z) {
    Field o(*v_r.g); cyl_div(v_r, v_z, o); return o;
}
inline Field visc_swirl(const Field& w) { Field o(*w.g); visc_swirl(w, o); return o; }
inline Field visc_axial(const Field& w) { Field o(*w.g); visc_axial(w, o); return o; }

namespace serial {
void d_r(const Field& f, Field& out);
void d_z(const Field& f, Field& out);
void d_rr(const Field& f, Field& out);
void d_zz(const Field& f, Field& out);
void cyl_div(const Field& v_r, const Field& v_z, Field& out);
void visc_swirl(const Field& w, Field& out);
void visc_axial(const Field& w, Field& out);
}  // namespace serial

}  // namespace ops
}  // namespace circ
