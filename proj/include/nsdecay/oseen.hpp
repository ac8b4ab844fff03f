#pragma once

#include <vector>

#include "nsdecay/field.hpp"
#include "nsdecay/grid.hpp"

namespace nsd {

// Self-similar profile Phi = F(.,1) of the kernel of e^{tΔ} P div, synthesized
// from the frequency symbol
//   Fhat_{j;k,l}(xi) = exp(-|xi|^2) (i xi_l) (delta_{jk} - xi_j xi_k/|xi|^2),
// with the xi=0 sample set to 0. Scaling: F(x,t) = t^{-(n+1)/2} Phi(x/sqrt(t)).
struct OseenProfile {
    int n = 2;
    GridSpec g;                              // synthesis grid (extent = g.L)
    std::vector<std::vector<double>> comp;   // n^3 scalars, index (j*n+k)*n+l
    double phi_l1 = 0.0;                     // ∫ |Phi|_F over the grid window
    double phi_sup = 0.0;                    // max_x |Phi|_F
    double tail_const = 0.0;                 // sup |Phi|_F (1+r)^{n+1}

    const std::vector<double>& at(int j, int k, int l) const {
        return comp[(j * n + k) * n + l];
    }
    // |Phi|_F at flat grid index
    double frob(size_t i) const {
        double s = 0.0;
        for (const auto& c : comp) s += c[i] * c[i];
        return std::sqrt(s);
    }
};

OseenProfile build_oseen_profile(int n, int N, double extent);

// Tensor-product cubic interpolation of F(x,t); out has n^3 entries.
void eval_F(const OseenProfile& p, const double* x, double t, double* out);
double eval_F_frob(const OseenProfile& p, const double* x, double t);

struct KernelEstimateReport {
    std::vector<double> times;
    std::vector<double> l1;             // windowed ∫|F(.,t)|_F, per t
    std::vector<double> l1_scaled;      // l1 * sqrt(t)
    std::vector<int> quad_n;            // quadrature resolution per t
    double l1_spread = 0.0;             // max relative deviation of l1_scaled
    std::vector<double> c_spatial;      // sup |F| |x|^{n+1}, per t
    std::vector<double> c_temporal;     // sup |F| t^{(n+1)/2}, per t
    double usugt_const = 0.0;           // sup |g_t(x)| |x|^n over a raster
    double usugt0_const = 0.0;          // sup |g_t(x)| t^{n/2}
};

KernelEstimateReport kernel_bounds_report(const OseenProfile& p,
                                          const std::vector<double>& times);

}  // namespace nsd
