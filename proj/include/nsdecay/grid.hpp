#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "nsdecay/common.hpp"

namespace nsd {

// Uniform grid on the centered periodic box [-L,L)^n, C-order (last axis fastest).
// Wavenumbers xi = (pi/L) k with k in FFT order; xi_tilde zeroes the Nyquist mode
// (used for derivatives and the projector), the heat factor uses the full xi.
struct GridSpec {
    int n = 2;
    std::array<int, 3> dims{0, 0, 0};
    double L = 0.0;

    GridSpec() = default;
    GridSpec(int n_, int N, double L_) : n(n_), L(L_) {
        if (n < 2 || n > 3) throw validation_error("GridSpec: n must be 2 or 3");
        if (N < 4 || N % 2 != 0) throw validation_error("GridSpec: grid size must be even");
        if (!(L > 0)) throw validation_error("GridSpec: L must be positive");
        for (int i = 0; i < n; ++i) dims[i] = N;
    }
    GridSpec(int n_, const std::vector<int>& dims_, double L_) : n(n_), L(L_) {
        if (n < 2 || n > 3) throw validation_error("GridSpec: n must be 2 or 3");
        if (int(dims_.size()) < n) throw validation_error("GridSpec: missing dims");
        if (!(L > 0)) throw validation_error("GridSpec: L must be positive");
        for (int i = 0; i < n; ++i) {
            if (dims_[i] < 4 || dims_[i] % 2 != 0)
                throw validation_error("GridSpec: grid size must be even");
            dims[i] = dims_[i];
        }
    }

    size_t size() const {
        size_t s = 1;
        for (int i = 0; i < n; ++i) s *= dims[i];
        return s;
    }
    double dx(int axis) const { return 2.0 * L / dims[axis]; }
    double cell() const {
        double v = 1.0;
        for (int i = 0; i < n; ++i) v *= dx(i);
        return v;
    }
    double coord(int axis, int i) const { return -L + i * dx(axis); }

    int kindex(int axis, int i) const {
        return i <= dims[axis] / 2 - 1 ? i : i - dims[axis];
    }
    double xi(int axis, int i) const { return M_PI / L * kindex(axis, i); }
    double xi_tilde(int axis, int i) const {
        return i == dims[axis] / 2 ? 0.0 : xi(axis, i);
    }

    // decode flat index -> per-axis indices
    void decode(size_t idx, int* out) const {
        if (n == 2) {
            out[1] = int(idx % dims[1]);
            out[0] = int(idx / dims[1]);
        } else {
            out[2] = int(idx % dims[2]);
            idx /= dims[2];
            out[1] = int(idx % dims[1]);
            out[0] = int(idx / dims[1]);
        }
    }

    bool operator==(const GridSpec& o) const {
        return n == o.n && dims == o.dims && L == o.L;
    }
};

}  // namespace nsd
