#include "nsdecay/norms.hpp"

#include <cmath>

namespace nsd {

double weighted_sup_field(const GridField& a, int m, double rmax) {
    const GridSpec& g = a.g;
    const double p = g.n + 1 + m;
    double best = 0.0;
    const long nn = long(g.size());
#pragma omp parallel for reduction(max : best) schedule(static)
    for (long i = 0; i < nn; ++i) {
        int id[3];
        g.decode(size_t(i), id);
        double r2 = 0.0;
        for (int ax = 0; ax < g.n; ++ax) {
            double x = g.coord(ax, id[ax]);
            r2 += x * x;
        }
        if (r2 > rmax * rmax) continue;
        double v = a.mag(size_t(i)) * std::pow(1.0 + std::sqrt(r2), p);
        best = std::max(best, v);
    }
    return best;
}

WeightedNormReport weighted_norms(const GridField& a, int m) {
    WeightedNormReport r;
    r.m = m;
    r.window_radius = a.g.L / 2.0;
    GridField tmp = a;
    tmp.ensure_phys();
    r.E_m = weighted_sup_field(tmp, m, r.window_radius);
    return r;
}

WeightedNormReport weighted_norms(const std::vector<double>& times,
                                  const std::vector<GridField>& u, int m) {
    WeightedNormReport r;
    r.m = m;
    if (u.empty()) return r;
    r.window_radius = u[0].g.L / 2.0;
    const double p = (u[0].g.n + 1 + m) / 2.0;
    for (size_t k = 0; k < u.size(); ++k) {
        GridField tmp = u[k];
        tmp.ensure_phys();
        r.X_space = std::max(r.X_space, weighted_sup_field(tmp, m, r.window_radius));
        r.X_time = std::max(r.X_time, std::pow(1.0 + times[k], p) * tmp.sup());
    }
    r.E_m = r.X_space;
    return r;
}

std::vector<std::pair<double, double>> radial_shell_max(const GridField& f, double rlo,
                                                        double rhi, int bins) {
    const GridSpec& g = f.g;
    std::vector<double> edges(bins + 1);
    for (int b = 0; b <= bins; ++b)
        edges[b] = rlo * std::pow(rhi / rlo, double(b) / bins);
    std::vector<double> mx(bins, 0.0);
    const long nn = long(g.size());
    for (long i = 0; i < nn; ++i) {
        int id[3];
        g.decode(size_t(i), id);
        double r2 = 0.0;
        for (int ax = 0; ax < g.n; ++ax) {
            double x = g.coord(ax, id[ax]);
            r2 += x * x;
        }
        double r = std::sqrt(r2);
        if (r < rlo || r >= rhi) continue;
        int b = int(std::log(r / rlo) / std::log(rhi / rlo) * bins);
        b = std::min(std::max(b, 0), bins - 1);
        mx[b] = std::max(mx[b], f.mag(size_t(i)));
    }
    std::vector<std::pair<double, double>> out(bins);
    for (int b = 0; b < bins; ++b)
        out[b] = {std::sqrt(edges[b] * edges[b + 1]), mx[b]};
    return out;
}

DecayFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys,
                    double floor, int min_pts) {
    DecayFit f;
    std::vector<double> lx, ly;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (ys[i] > floor && xs[i] > 0) {
            lx.push_back(std::log(xs[i]));
            ly.push_back(std::log(ys[i]));
            f.xs.push_back(xs[i]);
            f.ys.push_back(ys[i]);
        }
    }
    if (int(lx.size()) < min_pts) {
        f.note = "window underflow: " + std::to_string(lx.size()) +
                 " usable points (need " + std::to_string(min_pts) + ")";
        return f;
    }
    const size_t n = lx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double den = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_res = 0, ss_tot = 0, ym = sy / n;
    for (size_t i = 0; i < n; ++i) {
        double e = ly[i] - (f.intercept + f.slope * lx[i]);
        ss_res += e * e;
        ss_tot += (ly[i] - ym) * (ly[i] - ym);
    }
    f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    f.win_lo = f.xs.front();
    f.win_hi = f.xs.back();
    f.ok = true;
    return f;
}

DecayFit tail_exponent_fit(const GridField& f, double rlo, double rhi, int bins) {
    if (rhi > f.g.L / 4.0 + 1e-12)
        throw validation_error("tail_exponent_fit: window must stay within |x| <= L/4");
    if (bins < 8) throw validation_error("tail_exponent_fit: need >= 8 bins");
    GridField tmp = f;
    tmp.ensure_phys();
    auto prof = radial_shell_max(tmp, rlo, rhi, bins);
    std::vector<double> xs, ys;
    for (auto& p : prof) {
        xs.push_back(p.first);
        ys.push_back(p.second);
    }
    return fit_loglog(xs, ys);
}

DecayFit temporal_exponent_fit(const std::vector<double>& times,
                               const std::vector<double>& sups, double tlo, double thi) {
    std::vector<double> xs, ys;
    for (size_t i = 0; i < times.size(); ++i)
        if (times[i] >= tlo && times[i] <= thi) {
            xs.push_back(times[i]);
            ys.push_back(sups[i]);
        }
    return fit_loglog(xs, ys);
}

}  // namespace nsd
