#pragma once

#include <string>
#include <vector>

#include "nsdecay/field.hpp"

namespace nsd {

// Discrete E_m / X-norm report. The essential sup becomes a grid max restricted
// to |x| <= L/2 (domain-truncation hygiene; exclusion documented in the report).
struct WeightedNormReport {
    int m = 0;
    double E_m = 0.0;      // sup (1+|x|)^{n+1+m} |a(x)|
    double X_space = 0.0;  // sup over stored times of the spatially weighted sup
    double X_time = 0.0;   // sup (1+t)^{(n+1+m)/2} |u(x,t)|
    double window_radius = 0.0;
};

WeightedNormReport weighted_norms(const GridField& a, int m);
WeightedNormReport weighted_norms(const std::vector<double>& times,
                                  const std::vector<GridField>& u, int m);

// sup over |x| <= rmax of (1+|x|)^{n+1+m} |a(x)| (needs physical samples)
double weighted_sup_field(const GridField& a, int m, double rmax);

// Radial shell max of |field| over geometric bins in [rlo, rhi].
std::vector<std::pair<double, double>> radial_shell_max(const GridField& f, double rlo,
                                                        double rhi, int bins);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;              // coefficient of determination
    double win_lo = 0.0, win_hi = 0.0;
    std::vector<double> xs, ys;   // profile data actually fitted
    bool ok = false;
    std::string note;
};

// Least-squares slope of log(y) vs log(x); points with y below the noise floor
// are excluded; fails (ok=false) if fewer than min_pts survive.
DecayFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys,
                    double floor = 1e-14, int min_pts = 8);

// Spatial variant: shell-max profile of |f| on [rlo, rhi] (requires rhi <= L/4).
DecayFit tail_exponent_fit(const GridField& f, double rlo, double rhi, int bins = 12);

// Temporal variant: sup-norm series against time.
DecayFit temporal_exponent_fit(const std::vector<double>& times,
                               const std::vector<double>& sups, double tlo, double thi);

}  // namespace nsd
