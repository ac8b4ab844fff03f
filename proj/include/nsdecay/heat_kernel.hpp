#pragma once

#include <cmath>

#include "nsdecay/common.hpp"

namespace nsd {

// Physicists' Hermite polynomial H_k(z) by recurrence.
inline double hermite(int k, double z) {
    double h0 = 1.0, h1 = 2.0 * z;
    if (k == 0) return h0;
    if (k == 1) return h1;
    for (int i = 1; i < k; ++i) {
        double h2 = 2.0 * z * h1 - 2.0 * i * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

// g_t(x) = (4 pi t)^{-n/2} exp(-|x|^2/4t); the kernel factorizes per axis and
//   d^k/dx^k g1d = (4 pi t)^{-1/2} (2 sqrt(t))^{-k} (-1)^k H_k(z) e^{-z^2},  z = x/(2 sqrt(t)).
inline double heat_kernel_deriv_1d(double x, double t, int k) {
    if (!(t > 0)) throw validation_error("heat_kernel: t must be > 0");
    const double z = x / (2.0 * std::sqrt(t));
    const double pref = 1.0 / std::sqrt(4.0 * M_PI * t);
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    return pref * sgn * std::pow(2.0 * std::sqrt(t), -k) * hermite(k, z) * std::exp(-z * z);
}

inline double heat_kernel_deriv(const double* x, int n, double t, const MIdx& alpha) {
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= heat_kernel_deriv_1d(x[i], t, alpha[i]);
    return v;
}

inline double heat_kernel(const double* x, int n, double t) {
    MIdx zero;
    zero.n = n;
    return heat_kernel_deriv(x, n, t, zero);
}

}  // namespace nsd
