#pragma once

#include <memory>
#include <vector>

#include "nsdecay/field.hpp"
#include "nsdecay/norms.hpp"
#include "nsdecay/profiles.hpp"

namespace nsd {

// Family sampled on a grid, with the discrete Gram matrix of the subtraction
// system factorized once. Shared by assemble_R / assemble_force / the solver.
struct SampledFamily {
    const ControlProfileFamily* family = nullptr;
    GridSpec g;
    int sub_order = 0;                       // subtraction runs over |alpha| <= sub_order
    std::vector<MIdx> alphas;                // multi_indices(n, sub_order)
    std::vector<std::vector<double>> chi;    // sampled chi_alpha, per alpha
    // LU of D_{beta,alpha} = sum_grid x^beta chi_alpha dx^n (see assemble_R)
    std::vector<double> gram;                // row-major K x K
    std::vector<double> gram_lu;             // factorized (Eigen, kept opaque)
    double gram_defect = 0.0;                // max |D - I|

    SampledFamily() = default;
    SampledFamily(const ControlProfileFamily& f, const GridSpec& g, int sub_order);
    // solve D c = rhs
    std::vector<double> solve(const std::vector<double>& rhs) const;
    size_t count() const { return alphas.size(); }
};

// Time series of the (n x n) matrices A_alpha(t_k), |alpha| <= m-1.
struct MomentSignal {
    int n = 2, m = 0;
    std::vector<MIdx> alphas;
    std::vector<double> times;
    // values[time][alpha][i*n+j]
    std::vector<std::vector<std::vector<double>>> A;
    bool empty_order() const { return m == 0; }
};

// Rectangle-rule moments M_alpha[i*n+j] = sum y^alpha u_i v_j dx^n, |alpha| <= m-1.
std::vector<std::vector<double>> tensor_moments(const GridField& u, const GridField& v,
                                                int m);

// R_m(u,v) = u (x) v - sum_alpha c_alpha chi_alpha with coefficients from the
// discrete Gram solve, so that all discrete moments |beta| <= m-1 vanish to
// machine precision. Returns the n^2-component matrix field; optionally the
// coefficients used (the signal slice) and the residual-moment certificate.
GridField assemble_R(const GridField& u, const GridField& v, const SampledFamily& sf,
                     int m, std::vector<std::vector<double>>* coeffs = nullptr,
                     double* moment_residual = nullptr);

struct ForceField {
    int n = 2, m = 0;
    std::vector<double> times;
    std::vector<GridField> f;  // n^2-component snapshots
    MomentSignal signal;
};

// f_m(., t_k) = sum_alpha A_alpha(t_k) chi_alpha; m=0 gives the zero force.
ForceField assemble_force(const SampledFamily& sf, const MomentSignal& signal);

// Temporal slope of sup|f| against the (sizef) target -(n+3+m)/2.
DecayFit force_decay_report(const ForceField& force, double tlo, double thi);

}  // namespace nsd
