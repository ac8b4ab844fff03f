#pragma once

#include "nsdecay/bump.hpp"
#include "nsdecay/field.hpp"

namespace nsd {

// u0 = grad^perp(d1^m zeta) with zeta = b(x1) b(x2) (normalized bumps on
// [-width,width] per axis):
//   u0 = (-b^{(m)}(x1) b'(x2),  b^{(m+1)}(x1) b(x2)) * A.
// Discrete moments vanish for all |alpha| <= m and the (m,1) moment is nonzero
// (the datum has exactly order m, not more). Amplitude A scales sup|u0| to the
// requested value.
struct DatumSpec {
    int m = 0;            // vanishing-moment order
    double width = 2.0;   // support half-width per axis
    double amplitude = 1.0;
    int family_order = -1;  // optional consumer-order check (family must be >= this)
};

struct DatumCertificate {
    double max_moment = 0.0;   // max |discrete moment| / L1-scale, |alpha| <= m
    double max_div = 0.0;      // max |div u0| / sup|u0|
    double sup = 0.0;
    double sharp_moment = 0.0; // |(m,1) moment| / L1-scale, should be O(1)
};

GridField make_initial_datum(const GridSpec& g, const DatumSpec& spec,
                             DatumCertificate* cert = nullptr);

// Closed-form free-space heat evolution of the datum (separable 1D convolutions
// g_t * b^{(r)} per axis, Gauss-Legendre over supp b). Used by the lemma-1 path
// where the periodic box would be contaminated.
struct FreeHeatDatum {
    DatumSpec spec;
    Bump bump;
    explicit FreeHeatDatum(const DatumSpec& s) : spec(s), bump(BumpSpec(-s.width, s.width)) {}

    double conv1d(double x, double t, int r, int qnodes = 96) const;
    // u(x,t) components (n=2)
    void eval(const double* x, double t, double* u, int qnodes = 96) const;
    double mag(const double* x, double t, int qnodes = 96) const;
};

}  // namespace nsd
