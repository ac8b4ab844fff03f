#include "nsdecay/datum.hpp"

#include <cmath>

#include "nsdecay/quadrature.hpp"

namespace nsd {

GridField make_initial_datum(const GridSpec& g, const DatumSpec& spec,
                             DatumCertificate* cert) {
    if (g.n != 2) throw validation_error("make_initial_datum: n=2 only");
    if (spec.m < 0) throw validation_error("make_initial_datum: m must be >= 0");
    if (spec.width >= g.L / 4.0)
        throw validation_error(
            "make_initial_datum: support does not fit in the interior window");
    if (spec.family_order >= 0 && spec.family_order < spec.m)
        throw validation_error("make_initial_datum: family order below datum order");

    Bump b(BumpSpec(-spec.width, spec.width));
    GridField u = GridField::zeros(g, 2);
    const int m = spec.m;
    const long nn = long(g.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < nn; ++i) {
        int id[3];
        g.decode(size_t(i), id);
        const double x1 = g.coord(0, id[0]), x2 = g.coord(1, id[1]);
        u.phys[0][i] = -b.deriv(x1, m) * b.deriv(x2, 1);
        u.phys[1][i] = b.deriv(x1, m + 1) * b(x2);
    }
    const double sup = u.sup();
    if (sup == 0.0) throw validation_error("make_initial_datum: degenerate datum");
    const double A = spec.amplitude / sup;
    k::scale(u.phys[0], A);
    k::scale(u.phys[1], A);

    // the stream-function form is divergence-free exactly, but its samples are
    // not divergence-free in the discrete (spectral) sense; project onto the
    // discrete solenoidal space so the solver starts from clean data
    u = leray_project(std::move(u));

    if (cert) {
        cert->sup = spec.amplitude;
        // L1-type scale for the moment certificates
        std::vector<double> absmag(g.size());
        for (size_t i = 0; i < g.size(); ++i) absmag[i] = u.mag(i);
        MIdx zero;
        const double scale = k::moment_sum(g, absmag, zero) *
                             std::pow(1.0 + spec.width, m + 1);
        cert->max_moment = 0.0;
        for (const auto& al : multi_indices(2, m))
            for (int c = 0; c < 2; ++c)
                cert->max_moment = std::max(
                    cert->max_moment, std::abs(k::moment_sum(g, u.phys[c], al)) / scale);
        MIdx sharp{{m, 1, 0}, 2};
        cert->sharp_moment = std::abs(k::moment_sum(g, u.phys[0], sharp)) / scale;
        cert->max_div = max_divergence(u) / spec.amplitude;
    }
    return u;
}

double FreeHeatDatum::conv1d(double x, double t, int r, int qnodes) const {
    // (g_t * b^{(r)})(x), integrating over supp b = [-w, w]
    static thread_local int cached_n = -1;
    static thread_local GaussRule rule;
    if (cached_n != qnodes) {
        rule = gauss_legendre(qnodes);
        cached_n = qnodes;
    }
    const double w = spec.width;
    double s = 0.0;
    for (int i = 0; i < qnodes; ++i) {
        const double y = w * rule.x[i];
        const double d = x - y;
        s += rule.w[i] * std::exp(-d * d / (4.0 * t)) * bump.deriv(y, r);
    }
    return s * w / std::sqrt(4.0 * M_PI * t);
}

void FreeHeatDatum::eval(const double* x, double t, double* u, int qnodes) const {
    const int m = spec.m;
    u[0] = -conv1d(x[0], t, m, qnodes) * conv1d(x[1], t, 1, qnodes);
    u[1] = conv1d(x[0], t, m + 1, qnodes) * conv1d(x[1], t, 0, qnodes);
}

double FreeHeatDatum::mag(const double* x, double t, int qnodes) const {
    double u[2];
    eval(x, t, u, qnodes);
    return std::sqrt(u[0] * u[0] + u[1] * u[1]);
}

}  // namespace nsd
