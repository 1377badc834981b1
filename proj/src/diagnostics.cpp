#include "circ/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "circ/reduce.hpp"

namespace circ {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// sum_ij quad_r[i] quad_z[j] radw[i] a(i,j) b(i,j), fixed-order pairwise
double inner_w(const Field& a, const Field& b, const std::vector<double>& radw) {
    const Grid& g = *a.g;
    const int nr = g.nr(), nz = g.nz();
    std::vector<double> scratch(g.size());
    for (int i = 0; i < nr; ++i) {
        const double wi = g.quad_r[i] * radw[i];
        for (int j = 0; j < nz; ++j)
            scratch[g.idx(i, j)] = wi * g.quad_z[j] * a(i, j) * b(i, j);
    }
    return pairwise_sum(scratch);
}

double sq_w(const Field& a, const std::vector<double>& radw) { return inner_w(a, a, radw); }

struct Weights {
    std::vector<double> r, inv_r, rho_r, press_r;
};

Weights make_weights(const Grid& g, const BackgroundField& bg) {
    const int nr = g.nr();
    Weights w;
    w.r.resize(nr);
    w.inv_r.resize(nr);
    w.rho_r.resize(nr);
    w.press_r.resize(nr);
    for (int i = 0; i < nr; ++i) {
        w.r[i] = g.r[i];
        w.inv_r[i] = 1.0 / g.r[i];
        w.rho_r[i] = bg.rho_bar[i] * g.r[i];
        w.press_r[i] = bg.rho_bar_gm2[i] * g.r[i];
    }
    return w;
}

// (1/r) d_r(r w), the cylindrical divergence-form radial derivative
Field cyl_dr(const Field& w) {
    const Grid& g = *w.g;
    Field rw(g);
    for (int i = 0; i < g.nr(); ++i)
        for (int j = 0; j < g.nz(); ++j) rw(i, j) = g.r[i] * w(i, j);
    Field out = ops::d_r(rw);
    for (int i = 0; i < g.nr(); ++i)
        for (int j = 0; j < g.nz(); ++j) out(i, j) /= g.r[i];
    return out;
}

double htilde_sq_impl(const Field& w, int k, const std::vector<double>& wr) {
    if (k < 0 || k > 3) throw std::invalid_argument("htilde_sq: k in {0,1,2,3} required");
    double total = sq_w(w, wr);
    std::vector<Field> level;
    level.push_back(w);
    for (int j = 1; j <= k; ++j) {
        std::vector<Field> next;
        next.reserve(level.size() + 1);
        next.push_back(ops::d_r(level[0]));
        for (std::size_t b = 0; b < level.size(); ++b) next.push_back(ops::d_z(level[b]));
        for (const Field& f : next) total += sq_w(f, wr);
        level = std::move(next);
    }
    return total;
}

struct TimeDerivs {
    const Tendency* dt2 = nullptr;        // second time derivative of the state
    const Field* dtf = nullptr;           // time derivative of f
    const std::array<Field, 3>* dtg = nullptr;
};

EnergyReport compute_report(const State& s, const Tendency& k1, const BackgroundField& bg,
                            const FlowParams& params, const Field* fnl,
                            const std::array<Field, 3>* gnl, const TimeDerivs& td) {
    (void)params;
    const Grid& g = s.grid();
    const int nr = g.nr(), nz = g.nz();
    const Weights w = make_weights(g, bg);
    EnergyReport rep;

    // pressure variable rho_bar^(gamma-2) phi and its z derivative
    Field pphi(g);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nz; ++j) pphi(i, j) = bg.rho_bar_gm2[i] * s.phi(i, j);
    Field phi_z = ops::d_z(s.phi);
    Field pphi_z(g);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nz; ++j) pphi_z(i, j) = bg.rho_bar_gm2[i] * phi_z(i, j);

    const Field* vel[3] = {&s.v_r, &s.v_theta, &s.v_z};
    Field dv_r[3], dv_z[3];
    for (int c = 0; c < 3; ++c) {
        dv_r[c] = ops::d_r(*vel[c]);
        dv_z[c] = ops::d_z(*vel[c]);
    }
    Field div = ops::cyl_div(s.v_r, s.v_z);

    rep.e_L2 = sq_w(s.v_r, w.rho_r) + sq_w(s.v_theta, w.rho_r) + sq_w(s.v_z, w.rho_r) +
               sq_w(s.phi, w.press_r);
    rep.e_grad = sq_w(div, w.r);
    for (int c = 0; c < 3; ++c) rep.e_grad += sq_w(dv_r[c], w.r) + sq_w(dv_z[c], w.r);
    rep.d_L2 = sq_w(s.v_r, w.inv_r) + sq_w(s.v_theta, w.inv_r) + rep.e_grad;
    rep.d_time = sq_w(k1.v_r, w.rho_r) + sq_w(k1.v_theta, w.rho_r) + sq_w(k1.v_z, w.rho_r) +
                 sq_w(k1.phi, w.press_r);

    // z-derivative ladder (Lemma 2.3 with k=0, j=1,2)
    Field dzz[3];
    for (int c = 0; c < 3; ++c) dzz[c] = ops::d_z(dv_z[c]);
    Field dzz_phi = ops::d_z(phi_z);
    rep.e_z1 = sq_w(dv_z[0], w.rho_r) + sq_w(dv_z[1], w.rho_r) + sq_w(dv_z[2], w.rho_r) +
               sq_w(phi_z, w.press_r);
    rep.e_z2 = sq_w(dzz[0], w.rho_r) + sq_w(dzz[1], w.rho_r) + sq_w(dzz[2], w.rho_r) +
               sq_w(dzz_phi, w.press_r);
    {
        rep.diss_z1 = sq_w(dv_z[0], w.inv_r) + sq_w(dv_z[1], w.inv_r);
        for (int c = 0; c < 3; ++c) {
            Field drdz = ops::d_r(dv_z[c]);
            rep.diss_z1 += sq_w(drdz, w.r) + sq_w(dzz[c], w.r);
        }
        Field comb = cyl_dr(dv_z[0]);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nz; ++j) comb(i, j) += dzz[2](i, j);
        rep.diss_z1 += sq_w(comb, w.r);
    }
    {
        rep.diss_z2 = sq_w(dzz[0], w.inv_r) + sq_w(dzz[1], w.inv_r);
        Field dz3[3];
        for (int c = 0; c < 3; ++c) {
            Field drdzz = ops::d_r(dzz[c]);
            dz3[c] = ops::d_z(dzz[c]);
            rep.diss_z2 += sq_w(drdzz, w.r) + sq_w(dz3[c], w.r);
        }
        Field comb = cyl_dr(dzz[0]);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nz; ++j) comb(i, j) += dz3[2](i, j);
        rep.diss_z2 += sq_w(comb, w.r);
    }

    // Lemma 2.4 energy from the exact tendency
    {
        const Field* kv[3] = {&k1.v_r, &k1.v_theta, &k1.v_z};
        rep.e_tD = 0.0;
        for (int c = 0; c < 3; ++c) {
            Field kr = ops::d_r(*kv[c]);
            Field kz = ops::d_z(*kv[c]);
            rep.e_tD += sq_w(kr, w.r) + sq_w(kz, w.r);
        }
        Field comb = cyl_dr(k1.v_r);
        Field kzz = ops::d_z(k1.v_z);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nz; ++j) comb(i, j) += kzz(i, j);
        rep.e_tD += sq_w(comb, w.r);
    }

    // Lemma 2.5 energy and dissipation
    Field pphi_r = ops::d_r(pphi);
    Field pphi_rr = ops::d_rr(pphi);
    Field pphi_z_r = ops::d_r(pphi_z);
    rep.e_press = sq_w(pphi_r, w.r) + sq_w(pphi_z_r, w.r) + sq_w(pphi_rr, w.r);
    {
        Field vr_rr = ops::d_rr(s.v_r);
        Field vrz_rr = ops::d_rr(dv_z[0]);
        rep.diss_press = sq_w(pphi_r, w.r) + sq_w(vr_rr, w.r) + sq_w(pphi_z_r, w.r) +
                         sq_w(vrz_rr, w.r) + sq_w(pphi_rr, w.r);
    }

    // nonlinear duality pairings
    if (fnl && gnl) {
        double gv = 0.0, gk = 0.0;
        for (int c = 0; c < 3; ++c) {
            gv += inner_w((*gnl)[c], *vel[c], w.rho_r);
            gk += inner_w((*gnl)[c], (c == 0 ? k1.v_r : c == 1 ? k1.v_theta : k1.v_z), w.rho_r);
        }
        rep.a1 = std::abs(gv) + std::abs(inner_w(*fnl, s.phi, w.press_r));
        rep.a2 = std::abs(gk) + std::abs(inner_w(*fnl, k1.phi, w.press_r));
        if (td.dtf && td.dtg && td.dt2) {
            double dgk = 0.0, dg2 = 0.0;
            const Field* kv[3] = {&k1.v_r, &k1.v_theta, &k1.v_z};
            const Field* k2v[3] = {&td.dt2->v_r, &td.dt2->v_theta, &td.dt2->v_z};
            for (int c = 0; c < 3; ++c) {
                dgk += inner_w((*td.dtg)[c], *kv[c], w.rho_r);
                dg2 += inner_w((*td.dtg)[c], *k2v[c], w.rho_r);
            }
            rep.a3 = std::abs(dgk) + std::abs(inner_w(*td.dtf, k1.phi, w.press_r)) +
                     std::abs(dg2) + std::abs(inner_w(*td.dtf, td.dt2->phi, w.press_r));
        } else {
            rep.a3 = kNaN;
        }
    } else {
        rep.a1 = rep.a2 = rep.a3 = 0.0;  // linearized solver: f, g identically zero
    }

    // Sobolev-scale pieces and N(t)
    rep.phi_h2 = htilde_sq_impl(pphi, 2, w.r);
    rep.v_h3 = 0.0;
    for (int c = 0; c < 3; ++c) rep.v_h3 += htilde_sq_impl(*vel[c], 3, w.r);
    const double dtv_h1 = htilde_sq_impl(k1.v_r, 1, w.r) + htilde_sq_impl(k1.v_theta, 1, w.r) +
                          htilde_sq_impl(k1.v_z, 1, w.r);
    const double dtphi_h1 = htilde_sq_impl(k1.phi, 1, w.r);
    rep.n_inst = rep.v_h3 + dtv_h1 + rep.phi_h2 + dtphi_h1;

    double dv_h3 = 0.0;
    for (int c = 0; c < 3; ++c)
        dv_h3 += htilde_sq_impl(dv_r[c], 3, w.r) + htilde_sq_impl(dv_z[c], 3, w.r);
    const double dpphi_h1 = htilde_sq_impl(pphi_r, 1, w.r) + htilde_sq_impl(ops::d_z(pphi), 1, w.r);
    rep.thm_integrand = dpphi_h1 + dv_h3;

    const double dtv_h2 = htilde_sq_impl(k1.v_r, 2, w.r) + htilde_sq_impl(k1.v_theta, 2, w.r) +
                          htilde_sq_impl(k1.v_z, 2, w.r);
    rep.n_integrand = sq_w(s.v_r, w.inv_r) + sq_w(s.v_theta, w.inv_r) + dv_h3 + dtv_h2 +
                      dtphi_h1 + dpphi_h1;
    if (td.dt2) {
        rep.dt2 = sq_w(td.dt2->phi, w.r) + sq_w(td.dt2->v_r, w.r) + sq_w(td.dt2->v_theta, w.r) +
                  sq_w(td.dt2->v_z, w.r);
        rep.n_integrand += rep.dt2;
    } else {
        rep.dt2 = kNaN;  // needs tendency history; the integrand omits it
    }
    return rep;
}

// derivative weights at t2 of the quadratic through (t0,t1,t2)
std::array<double, 3> backward_d1_weights(double t0, double t1, double t2) {
    return {(t2 - t1) / ((t0 - t1) * (t0 - t2)), (t2 - t0) / ((t1 - t0) * (t1 - t2)),
            (2.0 * t2 - t0 - t1) / ((t2 - t0) * (t2 - t1))};
}

}  // namespace

double weighted_lp(const Field& w, double alpha, double p) {
    if (p < 1.0) throw std::invalid_argument("weighted_lp: p >= 1 required");
    const Grid& g = *w.g;
    const int nr = g.nr(), nz = g.nz();
    std::vector<double> scratch(g.size());
    for (int i = 0; i < nr; ++i) {
        const double wi = g.quad_r[i] * std::pow(g.r[i], alpha);
        for (int j = 0; j < nz; ++j)
            scratch[g.idx(i, j)] = wi * g.quad_z[j] * std::pow(std::abs(w(i, j)), p);
    }
    return std::pow(pairwise_sum(scratch), 1.0 / p);
}

double inner_r(const Field& a, const Field& b, double alpha) {
    require_same_grid(a, b, "inner_r");
    const Grid& g = *a.g;
    std::vector<double> radw(g.nr());
    for (int i = 0; i < g.nr(); ++i) radw[i] = std::pow(g.r[i], alpha);
    return inner_w(a, b, radw);
}

double htilde_sq(const Field& w, int k) {
    const Grid& g = *w.g;
    std::vector<double> wr(g.r.begin(), g.r.end());
    return htilde_sq_impl(w, k, wr);
}

double htilde_sq(const std::vector<const Field*>& ws, int k) {
    double total = 0.0;
    for (const Field* w : ws) total += htilde_sq(*w, k);
    return total;
}

EnergyReport energy_report(const State& state, const Tendency& tendency,
                           const BackgroundField& bg, const FlowParams& params, bool nonlinear) {
    EnergyReport rep;
    if (nonlinear) {
        Field f = nonlinear_f(state, bg);
        std::array<Field, 3> g = nonlinear_g(state, bg, params);
        rep = compute_report(state, tendency, bg, params, &f, &g, {});
    } else {
        rep = compute_report(state, tendency, bg, params, nullptr, nullptr, {});
    }
    rep.bmon = boundary_monitor(state, 3);
    return rep;
}

DiagnosticCollector::DiagnosticCollector(const BackgroundField& bg, const FlowParams& params,
                                         bool nonlinear, int monitor_margin,
                                         double contamination_threshold)
    : bg_(&bg),
      params_(params),
      nonlinear_(nonlinear),
      margin_(monitor_margin),
      threshold_(contamination_threshold) {}

void DiagnosticCollector::sample(long step, double t, double dt, const State& state,
                                 const Tendency& k1) {
    if (!series_.t.empty() && !(t > series_.t.back()))
        throw std::invalid_argument("DiagnosticCollector: sample times must increase");

    const Grid& g = state.grid();
    Field f;
    std::array<Field, 3> gnl;
    if (nonlinear_) {
        f = nonlinear_f(state, *bg_);
        gnl = nonlinear_g(state, *bg_, params_);
    }

    TimeDerivs td;
    Tendency dt2(g);
    Field dtf(g);
    std::array<Field, 3> dtg = {Field(g), Field(g), Field(g)};
    if (hist_.size() >= 2) {
        const HistSlot& h0 = hist_[0];
        const HistSlot& h1 = hist_[1];
        const auto cw = backward_d1_weights(h0.t, h1.t, t);
        for (int c = 0; c < 4; ++c) {
            Field& out = dt2.component(c);
            const Field& a = h0.tendency.component(c);
            const Field& b = h1.tendency.component(c);
            const Field& cc = k1.component(c);
            for (std::size_t n = 0; n < out.v.size(); ++n)
                out.v[n] = cw[0] * a.v[n] + cw[1] * b.v[n] + cw[2] * cc.v[n];
        }
        td.dt2 = &dt2;
        if (nonlinear_) {
            for (std::size_t n = 0; n < dtf.v.size(); ++n)
                dtf.v[n] = cw[0] * h0.f.v[n] + cw[1] * h1.f.v[n] + cw[2] * f.v[n];
            for (int c = 0; c < 3; ++c)
                for (std::size_t n = 0; n < dtg[c].v.size(); ++n)
                    dtg[c].v[n] =
                        cw[0] * h0.g[c].v[n] + cw[1] * h1.g[c].v[n] + cw[2] * gnl[c].v[n];
            td.dtf = &dtf;
            td.dtg = &dtg;
        }
    }

    EnergyReport rep = compute_report(state, k1, *bg_, params_, nonlinear_ ? &f : nullptr,
                                      nonlinear_ ? &gnl : nullptr, td);
    rep.bmon = boundary_monitor(state, margin_);
    if (rep.bmon > threshold_) contaminated_ = true;

    auto push_int = [&](std::vector<double>& acc, double prev_val, double cur_val) {
        double inc = 0.0;
        if (!series_.t.empty()) {
            const double h = t - series_.t.back();
            const double p = std::isnan(prev_val) ? 0.0 : prev_val;
            const double c = std::isnan(cur_val) ? 0.0 : cur_val;
            inc = 0.5 * h * (p + c);
        }
        acc.push_back((acc.empty() ? 0.0 : acc.back()) + inc);
    };
    const EnergyReport* prev = series_.reports.empty() ? nullptr : &series_.reports.back();
    const EnergyReport zero{};
    const EnergyReport& pr = prev ? *prev : zero;
    push_int(series_.int_d_L2, pr.d_L2, rep.d_L2);
    push_int(series_.int_d_time, pr.d_time, rep.d_time);
    push_int(series_.int_z1, pr.diss_z1, rep.diss_z1);
    push_int(series_.int_z2, pr.diss_z2, rep.diss_z2);
    push_int(series_.int_press, pr.diss_press, rep.diss_press);
    push_int(series_.int_n, pr.n_integrand, rep.n_integrand);
    push_int(series_.int_thm, pr.thm_integrand, rep.thm_integrand);
    push_int(series_.int_a1, pr.a1, rep.a1);
    push_int(series_.int_a2, pr.a2, rep.a2);
    push_int(series_.int_a3, pr.a3, rep.a3);

    series_.step.push_back(step);
    series_.t.push_back(t);
    series_.dt.push_back(dt);
    series_.reports.push_back(rep);

    HistSlot slot{t, k1, std::move(f), std::move(gnl)};
    hist_.push_back(std::move(slot));
    if (hist_.size() > 2) hist_.pop_front();
}

std::vector<double> n_functional(const TimeSeries& series) {
    if (series.size() == 0) throw std::invalid_argument("n_functional: empty series");
    std::vector<double> out(series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
        out[i] = series.reports[i].n_inst + series.int_n[i];
    return out;
}

double theorem_ratio(const TimeSeries& series, const State& initial) {
    if (series.size() == 0) throw std::invalid_argument("theorem_ratio: empty series");
    const double denom = htilde_sq(initial.phi, 2) +
                         htilde_sq({&initial.v_r, &initial.v_theta, &initial.v_z}, 3);
    if (denom == 0.0) return kNaN;
    double sup = 0.0;
    for (const EnergyReport& r : series.reports) sup = std::max(sup, r.phi_h2 + r.v_h3);
    return (sup + series.int_thm.back()) / denom;
}

double boundary_monitor(const State& state, int margin) {
    const Grid& g = state.grid();
    const int nr = g.nr(), nz = g.nz();
    if (margin < 1 || margin >= std::min(nr, nz) / 4)
        throw std::invalid_argument("boundary_monitor: margin < min(n_r,n_z)/4 required");
    double m = 0.0;
    for (int c = 0; c < 4; ++c) {
        const Field& w = state.component(c);
        for (int i = nr - margin; i < nr; ++i)
            for (int j = 0; j < nz; ++j) m = std::max(m, std::abs(w(i, j)));
        if (!g.periodic_z()) {
            for (int i = 0; i < nr; ++i)
                for (int j = 0; j < margin; ++j) {
                    m = std::max(m, std::abs(w(i, j)));
                    m = std::max(m, std::abs(w(i, nz - 1 - j)));
                }
        }
    }
    return m;
}

double lemma21_balance_residual(const State& state, const BackgroundField& bg,
                                const FlowParams& params) {
    const Grid& g = state.grid();
    const Weights w = make_weights(g, bg);
    Tendency k = rhs_perturbation(state, bg, params, false);

    double dEdt = inner_w(k.v_r, state.v_r, w.rho_r) + inner_w(k.v_theta, state.v_theta, w.rho_r) +
                  inner_w(k.v_z, state.v_z, w.rho_r) +
                  params.A * params.gamma * inner_w(k.phi, state.phi, w.press_r);

    double d1 = sq_w(state.v_r, w.inv_r) + sq_w(state.v_theta, w.inv_r);
    const Field* vel[3] = {&state.v_r, &state.v_theta, &state.v_z};
    for (int c = 0; c < 3; ++c) {
        Field fr = ops::d_r(*vel[c]);
        Field fz = ops::d_z(*vel[c]);
        d1 += sq_w(fr, w.r) + sq_w(fz, w.r);
    }
    Field div = ops::cyl_div(state.v_r, state.v_z);
    const double d2 = sq_w(div, w.r);

    std::vector<double> cross_w(g.nr());
    for (int i = 0; i < g.nr(); ++i) cross_w[i] = 2.0 * params.M0 * bg.rho_bar[i] / g.r[i];
    const double x = inner_w(state.v_theta, state.v_r, cross_w);

    return dEdt + params.nu1 * d1 + params.nu2 * d2 - x;
}

}  // namespace circ
