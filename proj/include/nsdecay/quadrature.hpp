#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "nsdecay/common.hpp"

namespace nsd {

struct GaussRule {
    std::vector<double> x, w;  // nodes/weights on [-1,1]
};

// Gauss-Legendre nodes by Newton iteration on P_n; accurate to ~1e-15.
inline GaussRule gauss_legendre(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return r;
}

inline const GaussRule& gl15() {
    static const GaussRule r = gauss_legendre(15);
    return r;
}

template <class F>
double gauss_panel(const GaussRule& r, F&& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(c + h * r.x[i]);
    return s * h;
}

namespace detail {

struct PanelEst {
    double val, mag;  // signed integral and integral of |f| (round-off scale)
};

template <class F>
PanelEst gauss_panel2(const GaussRule& r, F&& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0, m = 0.0;
    for (size_t i = 0; i < r.x.size(); ++i) {
        const double v = f(c + h * r.x[i]);
        s += r.w[i] * v;
        m += r.w[i] * std::abs(v);
    }
    return {s * h, m * h};
}

template <class F>
double adapt(const GaussRule& r, F&& f, double a, double b, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const PanelEst l = gauss_panel2(r, f, a, m), rr = gauss_panel2(r, f, m, b);
    const double err = std::abs(l.val + rr.val - whole);
    // second test: the split disagrees only at the round-off floor of the sums
    if (err <= tol || err <= 100.0 * 2.2e-16 * (l.mag + rr.mag)) return l.val + rr.val;
    if (depth > 48) throw validation_error("adaptive quadrature failed to converge");
    return adapt(r, f, a, m, l.val, 0.5 * tol, depth + 1) +
           adapt(r, f, m, b, rr.val, 0.5 * tol, depth + 1);
}
}  // namespace detail

// Adaptive subdivision with a fixed 15-point Gauss rule per panel; absolute tolerance
// with a round-off floor at the local scale of ∫|f|.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12) {
    const auto& r = gl15();
    return detail::adapt(r, f, a, b, gauss_panel(r, f, a, b), tol, 0);
}

// Fixed composite rule; used as an independent oracle in tests, never in the main path.
template <class F>
double composite_gauss(F&& f, double a, double b, int panels, int order = 10) {
    const GaussRule r = gauss_legendre(order);
    double s = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) s += gauss_panel(r, f, a + p * h, a + (p + 1) * h);
    return s;
}

}  // namespace nsd
