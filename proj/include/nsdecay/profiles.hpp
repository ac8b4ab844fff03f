#pragma once

#include <memory>
#include <vector>

#include "nsdecay/bump.hpp"
#include "nsdecay/common.hpp"

namespace nsd {

struct MomentVector {
    int lmax = 0;
    std::vector<double> mu;  // mu[l] = ∫ s^l psi(s) ds, l = 0..lmax
};

// Hankel matrix M_{ij} = mu_{i+j}, 0 <= i,j <= m.
struct MomentMatrix {
    int m = 0;
    std::vector<double> entries;  // row-major (m+1)^2
    double at(int i, int j) const { return entries[i * (m + 1) + j]; }
};

MomentVector compute_moments(const BumpSpec& bump, int lmax, double tol = 1e-12);
MomentMatrix hankel(const MomentVector& mv, int m);
double smallest_eigenvalue(const MomentMatrix& M);
double condition_number(const MomentMatrix& M);

// Solves M a = e_0; throws validation_error if M is not positive definite.
std::vector<double> solve_moment_system(const MomentMatrix& M);

// phi(s) = P(s) psi(s) with ∫ s^k phi = delta_{k0} for k <= m.
struct Profile1D {
    BumpSpec bump_spec;
    int m = 0;
    std::vector<double> poly;  // a_0..a_m
    std::shared_ptr<Bump> bump;
    std::vector<double> moment_residuals;  // |∫ s^k phi - delta_{k0}|, k = 0..m
    double hankel_cond = 0.0;

    double operator()(double s) const;
    double deriv(double s, int r) const;  // Leibniz over P and psi
};

Profile1D build_profile(const BumpSpec& bump, int m);

// Tensorized family chi_alpha(x) = ((-1)^{|alpha|}/alpha!) ∂^alpha ∏_i phi_i(x_i).
struct ControlProfileFamily {
    int n = 2;
    int m = 0;
    std::vector<BumpSpec> boxes;   // per-axis interval of K
    std::vector<Profile1D> phi;    // per-axis profile, order m
    std::vector<MIdx> alphas;      // all |alpha| <= m

    double chi(const double* x) const;
    double chi_alpha(const MIdx& alpha, const double* x) const;
    bool in_box(const double* x) const;

    // Biorthogonality certificate: B_{alpha,beta} = ∫ x^beta chi_alpha dx over
    // all |alpha|,|beta| <= order (defaults to m). Entry table is row-major in
    // the multi_indices(n, order) enumeration.
    struct Certificate {
        int order = 0;
        std::vector<MIdx> idx;
        std::vector<double> B;
        double max_err = 0.0;  // max |B - I|
    };
    Certificate certify(int order = -1) const;
};

ControlProfileFamily build_chi_family(const std::vector<BumpSpec>& boxes, int m);

}  // namespace nsd
