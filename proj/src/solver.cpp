#include "nsdecay/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "nsdecay/norms.hpp"

namespace nsd {

void SolverConfig::validate() const {
    if (n != 2) throw validation_error("SolverConfig: n=2 only in the solver");
    if (!(T > 0)) throw validation_error("SolverConfig: T must be > 0");
    if (N < 8 || N % 2 != 0) throw validation_error("SolverConfig: grid size must be even");
    if (m < 0) throw validation_error("SolverConfig: m must be >= 0");
    if (tau_intervals < 2 || tau_intervals % 2 != 0)
        throw validation_error("SolverConfig: tau_intervals must be even and >= 2");
    if (panel_ratio <= 1.0) throw validation_error("SolverConfig: panel_ratio must be > 1");
    double prev = 0.0;
    for (double t : out_times) {
        if (t <= prev || t > T * (1 + 1e-12))
            throw validation_error("SolverConfig: out_times must be strictly increasing in (0,T]");
        prev = t;
    }
}

std::vector<double> SolverConfig::build_masters() const {
    std::vector<double> ms{0.0};
    const double t0 = std::min(t_geo_start, T);
    for (int j = 1; j <= masters_uniform; ++j)
        ms.push_back(t0 * double(j) / masters_uniform);
    double t = t0;
    while (t < T * (1 - 1e-12)) {
        t = std::min(t * panel_ratio, T);
        ms.push_back(t);
    }
    for (double to : out_times) ms.push_back(to);
    std::sort(ms.begin(), ms.end());
    std::vector<double> out;
    for (double v : ms)
        if (out.empty() || v - out.back() > 1e-12 * std::max(1.0, T)) out.push_back(v);
    if (std::abs(out.back() - T) > 1e-12 * T) out.push_back(T);
    return out;
}

TimeSampled TimeSampled::constant(const GridField& f, const std::vector<double>& two_times,
                                  std::vector<GridField>& storage) {
    storage.clear();
    storage.push_back(f);
    storage.push_back(f);
    TimeSampled ts;
    ts.times = &two_times;
    ts.fields = &storage;
    return ts;
}

namespace {

// linear-in-time reconstruction of the sampled field at time s (physical space)
GridField sample_at(const std::vector<double>& times, const std::vector<GridField>& u,
                    double s) {
    if (s <= times.front()) return u.front();
    if (s >= times.back()) return u.back();
    size_t k = size_t(std::upper_bound(times.begin(), times.end(), s) - times.begin()) - 1;
    const double th = (s - times[k]) / (times[k + 1] - times[k]);
    GridField out(u[k].g, u[k].ncomp);
    out.phys.resize(u[k].ncomp);
    for (int c = 0; c < u[k].ncomp; ++c) {
        out.phys[c].resize(u[k].g.size());
        k::lerp(out.phys[c], u[k].phys[c], u[k + 1].phys[c], th);
    }
    out.has_phys = true;
    return out;
}

// hhat_j = P_{jk} (i xi_l Rhat_{k,l}): divergence on the second slot, then the
// Leray projector -- the frequency symbol of P div applied to the matrix field.
std::vector<std::vector<cplx>> nonlinear_hat(const GridSpec& g, GridField& R,
                                             bool symmetric) {
    const int n = g.n;
    // FFT the unique components
    std::vector<std::vector<cplx>> Rhat(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (symmetric && j < i) continue;
            Rhat[i * n + j] = fft_forward_real(g, R.phys[i * n + j]);
        }
    if (symmetric)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) Rhat[i * n + j] = Rhat[j * n + i];

    std::vector<std::vector<cplx>> h(n);
    for (int kcomp = 0; kcomp < n; ++kcomp) {
        h[kcomp].assign(g.size(), cplx(0, 0));
        for (int l = 0; l < n; ++l) {
            std::vector<cplx> d = Rhat[kcomp * n + l];
            k::deriv_multiply(g, d, l);
            k::axpy(h[kcomp], cplx(1.0, 0.0), d);
        }
    }
    k::leray(g, h);
    return h;
}

struct NodeEval {
    const SampledFamily* sf;
    int m;
    std::vector<std::vector<cplx>> operator()(const std::vector<double>& ut,
                                              const std::vector<GridField>& uf,
                                              const std::vector<double>& vt,
                                              const std::vector<GridField>& vf,
                                              bool symmetric, double s) const {
        GridField us = sample_at(ut, uf, s);
        if (symmetric) {
            GridField R = assemble_R(us, us, *sf, m);
            return nonlinear_hat(us.g, R, true);
        }
        GridField vs = sample_at(vt, vf, s);
        GridField R = assemble_R(us, vs, *sf, m);
        return nonlinear_hat(us.g, R, false);
    }
};

double simpson_weight(int q, int M) {
    if (q == 0 || q == M) return 1.0;
    return (q % 2 == 1) ? 4.0 : 2.0;
}

}  // namespace

void duhamel_sweep(const GridSpec& g, const std::vector<double>& masters,
                   const std::vector<GridField>& u, const std::vector<GridField>& v,
                   bool symmetric, const SampledFamily* sf, int m, int tau_intervals,
                   const std::function<void(size_t, const std::vector<std::vector<cplx>>&)>&
                       on_master) {
    const int n = g.n;
    NodeEval eval{sf, m};
    std::vector<std::vector<cplx>> bhat(n, std::vector<cplx>(g.size(), cplx(0, 0)));
    const int M = tau_intervals;
    for (size_t p = 0; p + 1 < masters.size(); ++p) {
        const double s0 = masters[p], s1 = masters[p + 1], dlt = s1 - s0;
        for (int c = 0; c < n; ++c) k::heat_multiply(g, bhat[c], dlt);
        // panel integral: int_{s0}^{s1} e^{-(s1-s)|xi|^2} hhat(s) ds with
        // s = s1 - tau^2 -> int_0^{sqrt(dlt)} 2 tau e^{-tau^2 |xi|^2} hhat ds;
        // the tau=0 node contributes nothing (2 tau factor).
        const double tau_max = std::sqrt(dlt), htau = tau_max / M;
        for (int q = 1; q <= M; ++q) {
            const double tau = q * htau;
            const double s = s1 - tau * tau;
            auto h = eval(masters, u, masters, v, symmetric, s);
            const double w = simpson_weight(q, M) * htau / 3.0 * 2.0 * tau;
            for (int c = 0; c < n; ++c) k::heat_axpy(g, bhat[c], h[c], tau * tau, w);
        }
        on_master(p + 1, bhat);
    }
}

GridField duhamel_bilinear(const TimeSampled& u, const TimeSampled& v,
                           const SampledFamily* sf, int m, double t, double tol,
                           int* nodes_used) {
    if (t < 0) throw validation_error("duhamel_bilinear: t must be >= 0");
    const GridField& f0 = (*u.fields)[0];
    const GridSpec& g = f0.g;
    const int n = g.n;
    const bool symmetric = (u.fields == v.fields);
    GridField out = GridField::zeros(g, n);
    if (t == 0.0) return out;

    NodeEval eval{sf, m};
    auto integrate_with = [&](int M) {
        std::vector<std::vector<cplx>> acc(n, std::vector<cplx>(g.size(), cplx(0, 0)));
        const double tau_max = std::sqrt(t), htau = tau_max / M;
        for (int q = 1; q <= M; ++q) {
            const double tau = q * htau;
            const double s = t - tau * tau;
            auto h = eval(*u.times, *u.fields, *v.times, *v.fields, symmetric, s);
            const double w = simpson_weight(q, M) * htau / 3.0 * 2.0 * tau;
            for (int c = 0; c < n; ++c) k::heat_axpy(g, acc[c], h[c], tau * tau, w);
        }
        return acc;
    };

    int M = 16;
    auto acc = integrate_with(M);
    GridField cur(g, n);
    cur.phys.resize(n);
    for (int c = 0; c < n; ++c) cur.phys[c] = fft_backward_real(g, acc[c]);
    cur.has_phys = true;
    for (int doubling = 0; doubling < 6; ++doubling) {
        M *= 2;
        auto acc2 = integrate_with(M);
        GridField nxt(g, n);
        nxt.phys.resize(n);
        for (int c = 0; c < n; ++c) nxt.phys[c] = fft_backward_real(g, acc2[c]);
        nxt.has_phys = true;
        double diff = 0.0, scale = nxt.sup();
        for (int c = 0; c < n; ++c)
            diff = std::max(diff, k::max_abs_diff(cur.phys[c], nxt.phys[c]));
        if (std::getenv("NSDECAY_TRACE"))
            std::fprintf(stderr, "[duhamel] M=%d diff=%.3e scale=%.3e rel=%.3e\n", M,
                         diff, scale, diff / std::max(scale, 1e-300));
        cur = std::move(nxt);
        if (scale == 0.0 || diff <= tol * std::max(scale, 1e-300)) {
            if (nodes_used) *nodes_used = M;
            return cur;
        }
    }
    throw tolerance_error("duhamel_bilinear: node doubling did not converge");
}

Trajectory picard_solve(const GridField& u0_in, const ControlProfileFamily& family,
                        const SolverConfig& cfg) {
    cfg.validate();
    GridField u0 = u0_in;
    u0.ensure_spec();
    u0.ensure_phys();
    const GridSpec& g = u0.g;
    const int n = g.n;
    {
        const double s = u0.sup();
        if (s > 0 && max_divergence(u0) > 1e-8 * s)
            throw validation_error("picard_solve: u0 is not divergence-free");
    }
    SampledFamily sf(family, g, std::max(0, cfg.m - 1));

    Trajectory traj;
    traj.cfg = cfg;
    traj.times = cfg.build_masters();
    const size_t K = traj.times.size();

    // heat flow of the datum, recomputed from the spectral datum on demand
    auto heat_at = [&](size_t kk, int c) {
        std::vector<cplx> h = u0.spec[c];
        k::heat_multiply(g, h, traj.times[kk]);
        return h;
    };
    traj.u.clear();
    for (size_t k = 0; k < K; ++k) {
        GridField snap(g, n);
        snap.phys.resize(n);
        for (int c = 0; c < n; ++c) snap.phys[c] = fft_backward_real(g, heat_at(k, c));
        snap.has_phys = true;
        traj.u.push_back(std::move(snap));
    }

    const double u0sup = u0.sup();
    if (u0sup == 0.0) {
        traj.iterations = 1;
        traj.increments.push_back(0.0);
        traj.converged = true;
    } else {
        int bad_streak = 0;
        double prev_inc = -1.0;
        for (int it = 1; it <= cfg.picard_max; ++it) {
            std::vector<GridField> unew(K);
            unew[0] = traj.u[0];
            duhamel_sweep(g, traj.times, traj.u, traj.u, true, &sf, cfg.m,
                          cfg.tau_intervals,
                          [&](size_t k, const std::vector<std::vector<cplx>>& bhat) {
                              GridField snap(g, n);
                              snap.phys.resize(n);
                              for (int c = 0; c < n; ++c) {
                                  std::vector<cplx> tmp = heat_at(k, c);
                                  for (size_t i = 0; i < g.size(); ++i) tmp[i] -= bhat[c][i];
                                  snap.phys[c] = fft_backward_real(g, tmp);
                              }
                              snap.has_phys = true;
                              unew[k] = std::move(snap);
                          });
            // discrete X_{m,T} increment
            double inc = 0.0;
            for (size_t k = 0; k < K; ++k) {
                GridField diff(g, n);
                diff.phys.resize(n);
                for (int c = 0; c < n; ++c) {
                    diff.phys[c] = unew[k].phys[c];
                    k::axpy(diff.phys[c], -1.0, traj.u[k].phys[c]);
                }
                diff.has_phys = true;
                inc = std::max(inc, weighted_sup_field(diff, cfg.m, g.L / 2.0));
            }
            traj.u = std::move(unew);
            traj.increments.push_back(inc);
            traj.iterations = it;
            if (prev_inc > 0.0) {
                const double ratio = inc / prev_inc;
                traj.ratios.push_back(ratio);
                bad_streak = (ratio >= 1.0) ? bad_streak + 1 : 0;
                if (bad_streak >= 3)
                    throw non_contraction_error(
                        "picard_solve: increment ratio >= 1 for 3 consecutive "
                        "iterations -- outside the smallness regime; reduce the "
                        "amplitude or the horizon T");
            }
            prev_inc = inc;
            double xnorm = 0.0;
            for (size_t k = 0; k < K; ++k)
                xnorm = std::max(xnorm, weighted_sup_field(traj.u[k], cfg.m, g.L / 2.0));
            traj.x_norm = xnorm;
            if (inc <= cfg.picard_tol * std::max(1.0, xnorm)) {
                traj.converged = true;
                break;
            }
        }
    }

    // converged signal/force at the master times
    traj.signal.n = n;
    traj.signal.m = cfg.m;
    traj.signal.alphas = sf.alphas;
    traj.signal.times = traj.times;
    traj.signal.A.resize(K);
    double divmax = 0.0, supall = 0.0;
    for (size_t k = 0; k < K; ++k) {
        std::vector<std::vector<double>> C;
        if (cfg.m >= 1) {
            assemble_R(traj.u[k], traj.u[k], sf, cfg.m, &C);
        }
        traj.signal.A[k] = std::move(C);
        divmax = std::max(divmax, max_divergence(traj.u[k]));
        supall = std::max(supall, traj.u[k].sup());
    }
    traj.div_max = supall > 0 ? divmax / supall : 0.0;
    traj.force = assemble_force(sf, traj.signal);
    return traj;
}

Trajectory timestep_solve(const GridField& u0_in, const ControlProfileFamily& family,
                          const SolverConfig& cfg) {
    cfg.validate();
    GridField u0 = u0_in;
    u0.ensure_spec();
    const GridSpec& g = u0.g;
    const int n = g.n;
    SampledFamily sf(family, g, std::max(0, cfg.m - 1));

    std::vector<double> outs = cfg.out_times;
    if (outs.empty()) outs = {cfg.T};
    Trajectory traj;
    traj.cfg = cfg;
    traj.times.push_back(0.0);
    for (double t : outs) traj.times.push_back(t);

    // nonlinear term N(u) = -P div R_m(u,u), formed from dealiased samples
    auto rhs_hat = [&](const std::vector<std::vector<cplx>>& uhat) {
        GridField us(g, n);
        us.phys.resize(n);
        for (int c = 0; c < n; ++c) {
            std::vector<cplx> tmp = uhat[c];
            if (cfg.dealias) k::dealias(g, tmp);
            us.phys[c] = fft_backward_real(g, tmp);
        }
        us.has_phys = true;
        GridField R = assemble_R(us, us, sf, cfg.m);
        auto h = nonlinear_hat(g, R, true);
        for (int c = 0; c < n; ++c) {
            if (cfg.dealias) k::dealias(g, h[c]);
            k::scale(h[c], -1.0);
        }
        return h;
    };

    std::vector<std::vector<cplx>> uhat(n);
    for (int c = 0; c < n; ++c) uhat[c] = u0.spec[c];

    GridField snap0 = u0;
    snap0.ensure_phys();
    traj.u.push_back(snap0);

    double t = 0.0;
    double divmax = 0.0, supall = snap0.sup();
    for (double tout : outs) {
        while (t < tout * (1 - 1e-14)) {
            // CFL from the current sup
            GridField cur(g, n);
            cur.phys.resize(n);
            for (int c = 0; c < n; ++c) cur.phys[c] = fft_backward_real(g, uhat[c]);
            cur.has_phys = true;
            const double umax = cur.sup();
            double dt = cfg.dt_max;
            if (!cfg.zero_nonlinearity && umax > 0)
                dt = std::min(dt, cfg.cfl * g.dx(0) / umax);
            if (dt < cfg.dt_min)
                throw validation_error("timestep_solve: step-size rejection (dt below dt_min)");
            const int steps = std::max(1, int(std::ceil((tout - t) / dt - 1e-12)));
            dt = (tout - t) / steps;
            for (int sstep = 0; sstep < steps; ++sstep) {
                // integrating-factor RK2 (Heun)
                std::vector<std::vector<cplx>> k1(n), up(n);
                if (cfg.zero_nonlinearity) {
                    for (int c = 0; c < n; ++c) {
                        up[c] = uhat[c];
                        k::heat_multiply(g, up[c], dt);
                        uhat[c] = up[c];
                    }
                    continue;
                }
                k1 = rhs_hat(uhat);
                for (int c = 0; c < n; ++c) {
                    up[c] = uhat[c];
                    k::axpy(up[c], cplx(dt, 0.0), k1[c]);
                    k::heat_multiply(g, up[c], dt);
                }
                auto k2 = rhs_hat(up);
                for (int c = 0; c < n; ++c) {
                    k::heat_multiply(g, uhat[c], dt);
                    k::heat_multiply(g, k1[c], dt);
                    k::axpy(uhat[c], cplx(0.5 * dt, 0.0), k1[c]);
                    k::axpy(uhat[c], cplx(0.5 * dt, 0.0), k2[c]);
                }
            }
            t = tout;
        }
        GridField snap(g, n);
        snap.phys.resize(n);
        for (int c = 0; c < n; ++c) snap.phys[c] = fft_backward_real(g, uhat[c]);
        snap.has_phys = true;
        divmax = std::max(divmax, max_divergence(snap));
        supall = std::max(supall, snap.sup());
        traj.u.push_back(std::move(snap));
    }

    traj.signal.n = n;
    traj.signal.m = cfg.m;
    traj.signal.alphas = sf.alphas;
    traj.signal.times = traj.times;
    traj.signal.A.resize(traj.times.size());
    for (size_t k = 0; k < traj.times.size(); ++k) {
        std::vector<std::vector<double>> C;
        if (cfg.m >= 1) assemble_R(traj.u[k], traj.u[k], sf, cfg.m, &C);
        traj.signal.A[k] = std::move(C);
    }
    traj.div_max = supall > 0 ? divmax / supall : 0.0;
    traj.force = assemble_force(sf, traj.signal);
    traj.x_norm = weighted_norms(traj.times, traj.u, cfg.m).X_space;
    traj.converged = true;
    return traj;
}

std::vector<double> residual_check(Trajectory& traj, const ControlProfileFamily& family,
                                   const GridField& u0_in) {
    GridField u0 = u0_in;
    u0.ensure_spec();
    const GridSpec& g = u0.g;
    const int n = g.n;
    SampledFamily sf(family, g, std::max(0, traj.cfg.m - 1));
    const size_t K = traj.times.size();
    std::vector<double> res(K, 0.0);
    const double scale = std::max(1.0, traj.x_norm);

    if (traj.cfg.zero_nonlinearity) {
        // heat-flow limit: residual of u(t) - e^{tΔ}u0
        for (size_t k = 0; k < K; ++k) {
            GridField diff(g, n);
            diff.phys.resize(n);
            for (int c = 0; c < n; ++c) {
                std::vector<cplx> tmp = u0.spec[c];
                k::heat_multiply(g, tmp, traj.times[k]);
                diff.phys[c] = fft_backward_real(g, tmp);
                k::axpy(diff.phys[c], -1.0, traj.u[k].phys[c]);
                k::scale(diff.phys[c], -1.0);
            }
            diff.has_phys = true;
            res[k] = weighted_sup_field(diff, traj.cfg.m, g.L / 2.0) / scale;
        }
        traj.residuals = res;
        return res;
    }

    duhamel_sweep(
        g, traj.times, traj.u, traj.u, true, &sf, traj.cfg.m, traj.cfg.tau_intervals,
        [&](size_t k, const std::vector<std::vector<cplx>>& bhat) {
            GridField diff(g, n);
            diff.phys.resize(n);
            std::vector<cplx> tmp(g.size());
            for (int c = 0; c < n; ++c) {
                std::vector<cplx> h0 = u0.spec[c];
                k::heat_multiply(g, h0, traj.times[k]);
                for (size_t i = 0; i < g.size(); ++i) h0[i] = h0[i] - bhat[c][i];
                diff.phys[c] = fft_backward_real(g, h0);
                k::axpy(diff.phys[c], -1.0, traj.u[k].phys[c]);
            }
            diff.has_phys = true;
            res[k] = weighted_sup_field(diff, traj.cfg.m, g.L / 2.0) / scale;
        });
    traj.residuals = res;
    return res;
}

}  // namespace nsd
