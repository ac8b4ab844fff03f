#pragma once

#include <vector>

#include "nsdecay/fft.hpp"
#include "nsdecay/grid.hpp"
#include "nsdecay/kernels.hpp"

namespace nsd {

// n-component vector (or n^2-component matrix) field with physical samples and a
// lazily synchronized spectral twin.
struct GridField {
    GridSpec g;
    int ncomp = 0;
    std::vector<std::vector<double>> phys;
    std::vector<std::vector<cplx>> spec;
    bool has_phys = false, has_spec = false;

    GridField() = default;
    GridField(const GridSpec& g_, int ncomp_) : g(g_), ncomp(ncomp_) {}

    static GridField zeros(const GridSpec& g, int ncomp) {
        GridField f(g, ncomp);
        f.phys.assign(ncomp, std::vector<double>(g.size(), 0.0));
        f.has_phys = true;
        return f;
    }

    void ensure_spec() {
        if (has_spec) return;
        if (!has_phys) throw validation_error("GridField: no data");
        spec.resize(ncomp);
        for (int c = 0; c < ncomp; ++c) spec[c] = fft_forward_real(g, phys[c]);
        has_spec = true;
    }
    void ensure_phys() {
        if (has_phys) return;
        if (!has_spec) throw validation_error("GridField: no data");
        phys.resize(ncomp);
        for (int c = 0; c < ncomp; ++c) phys[c] = fft_backward_real(g, spec[c]);
        has_phys = true;
    }
    void drop_spec() {
        spec.clear();
        has_spec = false;
    }
    void drop_phys() {
        phys.clear();
        has_phys = false;
    }

    // pointwise magnitude over components at flat index i (physical)
    double mag(size_t i) const {
        double s = 0.0;
        for (int c = 0; c < ncomp; ++c) s += phys[c][i] * phys[c][i];
        return std::sqrt(s);
    }

    double sup() const {
        double m = 0.0;
        for (int c = 0; c < ncomp; ++c) m = std::max(m, k::max_abs(phys[c]));
        return m;
    }
};

// ---- spectral operations ----

inline GridField leray_project(GridField f) {
    f.ensure_spec();
    if (f.ncomp != f.g.n) throw validation_error("leray_project: need n components");
    k::leray(f.g, f.spec);
    f.drop_phys();
    f.ensure_phys();
    return f;
}

inline GridField heat_evolve(GridField f, double t) {
    if (t < 0) throw validation_error("heat_evolve: t must be >= 0");
    f.ensure_spec();
    if (t > 0)
        for (int c = 0; c < f.ncomp; ++c) k::heat_multiply(f.g, f.spec[c], t);
    f.drop_phys();
    f.ensure_phys();
    return f;
}

inline GridField derivative(GridField f, int axis) {
    f.ensure_spec();
    for (int c = 0; c < f.ncomp; ++c) k::deriv_multiply(f.g, f.spec[c], axis);
    f.drop_phys();
    f.ensure_phys();
    return f;
}

// max |div f| over the grid (n-component input)
inline double max_divergence(GridField f) {
    f.ensure_spec();
    std::vector<cplx> div(f.g.size(), cplx(0, 0));
    for (int a = 0; a < f.g.n; ++a) {
        std::vector<cplx> d = f.spec[a];
        k::deriv_multiply(f.g, d, a);
        k::axpy(div, cplx(1.0, 0.0), d);
    }
    std::vector<double> dphys = fft_backward_real(f.g, div);
    return k::max_abs(dphys);
}

}  // namespace nsd
