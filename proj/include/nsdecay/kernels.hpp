#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "nsdecay/grid.hpp"

// Hot pointwise/spectral kernels in two variants: nsd::par (OpenMP) and
// nsd::serial (plain loops, the reference used by tests and the benchmark).
// The default dispatch is runtime-switchable.

namespace nsd {

using cplx = std::complex<double>;

inline bool& parallel_enabled() {
    static bool on = true;
    return on;
}

#define NSD_KERNEL_IMPL(PRAGMA)                                                        \
    inline void scale(std::vector<double>& y, double a) {                              \
        const long n = long(y.size());                                                 \
        PRAGMA                                                                         \
        for (long i = 0; i < n; ++i) y[i] *= a;                                        \
    }                                                                                  \
    inline void scale(std::vector<cplx>& y, double a) {                                \
        const long n = long(y.size());                                                 \
        PRAGMA                                                                         \
        for (long i = 0; i < n; ++i) y[i] *= a;                                        \
    }                                                                                  \
    inline void axpy(std::vector<double>& y, double a, const std::vector<double>& x) { \
        const long n = long(y.size());                                                 \
        PRAGMA                                                                         \
        for (long i = 0; i < n; ++i) y[i] += a * x[i];                                 \
    }                                                                                  \
    inline void axpy(std::vector<cplx>& y, cplx a, const std::vector<cplx>& x) {       \
        const long n = long(y.size());                                                 \
        PRAGMA                                                                         \
        for (long i = 0; i < n; ++i) y[i] += a * x[i];                                 \
    }                                                                                  \
    inline void mul(std::vector<double>& z, const std::vector<double>& x,              \
                    const std::vector<double>& y) {                                    \
        const long n = long(z.size());                                                 \
        PRAGMA                                                                         \
        for (long i = 0; i < n; ++i) z[i] = x[i] * y[i];                               \
    }                                                                                  \
    /* lerp: z = (1-th) x + th y */                                                    \
    inline void lerp(std::vector<double>& z, const std::vector<double>& x,             \
                     const std::vector<double>& y, double th) {                        \
        const long n = long(z.size());                                                 \
        PRAGMA                                                                         \
        for (long i = 0; i < n; ++i) z[i] = (1.0 - th) * x[i] + th * y[i];             \
    }                                                                                  \
    /* multiply spectrum by exp(-t |xi|^2) (full xi, Nyquist included) */              \
    inline void heat_multiply(const GridSpec& g, std::vector<cplx>& s, double t) {     \
        const long n = long(g.size());                                                 \
        PRAGMA                                                                         \
        for (long i = 0; i < n; ++i) {                                                 \
            int id[3];                                                                 \
            g.decode(size_t(i), id);                                                   \
            double k2 = 0.0;                                                           \
            for (int a = 0; a < g.n; ++a) {                                            \
                double xi = g.xi(a, id[a]);                                            \
                k2 += xi * xi;                                                         \
            }                                                                          \
            s[i] *= std::exp(-t * k2);                                                 \
        }                                                                              \
    }                                                                                  \
    /* d/dx_axis in frequency (Nyquist-zeroed) */                                      \
    inline void deriv_multiply(const GridSpec& g, std::vector<cplx>& s, int axis) {    \
        const long n = long(g.size());                                                 \
        PRAGMA                                                                         \
        for (long i = 0; i < n; ++i) {                                                 \
            int id[3];                                                                 \
            g.decode(size_t(i), id);                                                   \
            s[i] *= cplx(0.0, g.xi_tilde(axis, id[axis]));                             \
        }                                                                              \
    }                                                                                  \
    /* in-place Leray projection of an n-component spectral field */                   \
    inline void leray(const GridSpec& g, std::vector<std::vector<cplx>>& s) {          \
        const long n = long(g.size());                                                 \
        const int d = g.n;                                                             \
        PRAGMA                                                                         \
        for (long i = 0; i < n; ++i) {                                                 \
            int id[3];                                                                 \
            g.decode(size_t(i), id);                                                   \
            double xi[3] = {0, 0, 0};                                                  \
            double k2 = 0.0;                                                           \
            for (int a = 0; a < d; ++a) {                                              \
                xi[a] = g.xi_tilde(a, id[a]);                                          \
                k2 += xi[a] * xi[a];                                                   \
            }                                                                          \
            if (k2 == 0.0) continue;                                                   \
            cplx dot(0.0, 0.0);                                                        \
            for (int a = 0; a < d; ++a) dot += xi[a] * s[a][i];                        \
            dot /= k2;                                                                 \
            for (int a = 0; a < d; ++a) s[a][i] -= xi[a] * dot;                        \
        }                                                                              \
    }                                                                                  \
    /* acc += w * exp(-tau2 |xi|^2) * h  (Duhamel quadrature accumulation) */           \
    inline void heat_axpy(const GridSpec& g, std::vector<cplx>& acc,                   \
                          const std::vector<cplx>& h, double tau2, double w) {         \
        const long n = long(g.size());                                                 \
        PRAGMA                                                                         \
        for (long i = 0; i < n; ++i) {                                                 \
            int id[3];                                                                 \
            g.decode(size_t(i), id);                                                   \
            double k2 = 0.0;                                                           \
            for (int a = 0; a < g.n; ++a) {                                            \
                double xi = g.xi(a, id[a]);                                            \
                k2 += xi * xi;                                                         \
            }                                                                          \
            acc[i] += w * std::exp(-tau2 * k2) * h[i];                                 \
        }                                                                              \
    }                                                                                  \
    /* 2/3-rule dealiasing */                                                          \
    inline void dealias(const GridSpec& g, std::vector<cplx>& s) {                     \
        const long n = long(g.size());                                                 \
        PRAGMA                                                                         \
        for (long i = 0; i < n; ++i) {                                                 \
            int id[3];                                                                 \
            g.decode(size_t(i), id);                                                   \
            for (int a = 0; a < g.n; ++a) {                                            \
                if (std::abs(g.kindex(a, id[a])) > g.dims[a] / 3) {                    \
                    s[i] = cplx(0.0, 0.0);                                             \
                    break;                                                             \
                }                                                                      \
            }                                                                          \
        }                                                                              \
    }

namespace serial {
#define NSD_SERIAL_PRAGMA
NSD_KERNEL_IMPL(NSD_SERIAL_PRAGMA)
#undef NSD_SERIAL_PRAGMA

inline double max_abs(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}
inline double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y) {
    double m = 0.0;
    for (size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}
inline double sum(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}
// sum of x^beta * f over the grid, times the cell volume (rectangle rule)
inline double moment_sum(const GridSpec& g, const std::vector<double>& f, const MIdx& beta) {
    double s = 0.0;
    const long n = long(g.size());
    for (long i = 0; i < n; ++i) {
        int id[3];
        g.decode(size_t(i), id);
        double w = 1.0;
        for (int a = 0; a < g.n; ++a) w *= std::pow(g.coord(a, id[a]), beta[a]);
        s += w * f[i];
    }
    return s * g.cell();
}
}  // namespace serial

namespace par {
#define NSD_PAR_PRAGMA _Pragma("omp parallel for schedule(static)")
NSD_KERNEL_IMPL(NSD_PAR_PRAGMA)
#undef NSD_PAR_PRAGMA

inline double max_abs(const std::vector<double>& x) {
    double m = 0.0;
    const long n = long(x.size());
#pragma omp parallel for reduction(max : m) schedule(static)
    for (long i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
    return m;
}
inline double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y) {
    double m = 0.0;
    const long n = long(x.size());
#pragma omp parallel for reduction(max : m) schedule(static)
    for (long i = 0; i < n; ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}
inline double sum(const std::vector<double>& x) {
    double s = 0.0;
    const long n = long(x.size());
#pragma omp parallel for reduction(+ : s) schedule(static)
    for (long i = 0; i < n; ++i) s += x[i];
    return s;
}
inline double moment_sum(const GridSpec& g, const std::vector<double>& f, const MIdx& beta) {
    double s = 0.0;
    const long n = long(g.size());
#pragma omp parallel for reduction(+ : s) schedule(static)
    for (long i = 0; i < n; ++i) {
        int id[3];
        g.decode(size_t(i), id);
        double w = 1.0;
        for (int a = 0; a < g.n; ++a) w *= std::pow(g.coord(a, id[a]), beta[a]);
        s += w * f[i];
    }
    return s * g.cell();
}
}  // namespace par

#undef NSD_KERNEL_IMPL

// Default dispatch; tests pin both variants explicitly.
namespace k {
#define NSD_DISPATCH(fn, ...) \
    (parallel_enabled() ? par::fn(__VA_ARGS__) : serial::fn(__VA_ARGS__))
inline void scale(std::vector<double>& y, double a) { NSD_DISPATCH(scale, y, a); }
inline void scale(std::vector<cplx>& y, double a) { NSD_DISPATCH(scale, y, a); }
inline void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
    NSD_DISPATCH(axpy, y, a, x);
}
inline void axpy(std::vector<cplx>& y, cplx a, const std::vector<cplx>& x) {
    NSD_DISPATCH(axpy, y, a, x);
}
inline void mul(std::vector<double>& z, const std::vector<double>& x,
                const std::vector<double>& y) {
    NSD_DISPATCH(mul, z, x, y);
}
inline void lerp(std::vector<double>& z, const std::vector<double>& x,
                 const std::vector<double>& y, double th) {
    NSD_DISPATCH(lerp, z, x, y, th);
}
inline void heat_multiply(const GridSpec& g, std::vector<cplx>& s, double t) {
    NSD_DISPATCH(heat_multiply, g, s, t);
}
inline void deriv_multiply(const GridSpec& g, std::vector<cplx>& s, int axis) {
    NSD_DISPATCH(deriv_multiply, g, s, axis);
}
inline void leray(const GridSpec& g, std::vector<std::vector<cplx>>& s) {
    NSD_DISPATCH(leray, g, s);
}
inline void heat_axpy(const GridSpec& g, std::vector<cplx>& acc, const std::vector<cplx>& h,
                      double tau2, double w) {
    NSD_DISPATCH(heat_axpy, g, acc, h, tau2, w);
}
inline void dealias(const GridSpec& g, std::vector<cplx>& s) { NSD_DISPATCH(dealias, g, s); }
inline double max_abs(const std::vector<double>& x) { return NSD_DISPATCH(max_abs, x); }
inline double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y) {
    return NSD_DISPATCH(max_abs_diff, x, y);
}
inline double sum(const std::vector<double>& x) { return NSD_DISPATCH(sum, x); }
inline double moment_sum(const GridSpec& g, const std::vector<double>& f, const MIdx& beta) {
    return NSD_DISPATCH(moment_sum, g, f, beta);
}
#undef NSD_DISPATCH
}  // namespace k

}  // namespace nsd
