#include "nsdecay/profiles.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "nsdecay/quadrature.hpp"

namespace nsd {

MomentVector compute_moments(const BumpSpec& spec, int lmax, double tol) {
    if (lmax < 0) throw validation_error("compute_moments: lmax must be >= 0");
    Bump psi(spec);
    MomentVector mv;
    mv.lmax = lmax;
    mv.mu.resize(lmax + 1);
    for (int l = 0; l <= lmax; ++l)
        mv.mu[l] = integrate([&](double s) { return std::pow(s, l) * psi(s); },
                             spec.a, spec.b, tol);
    return mv;
}

MomentMatrix hankel(const MomentVector& mv, int m) {
    if (mv.lmax < 2 * m) throw validation_error("hankel: moment vector too short");
    MomentMatrix M;
    M.m = m;
    M.entries.resize((m + 1) * (m + 1));
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j) M.entries[i * (m + 1) + j] = mv.mu[i + j];
    return M;
}

static Eigen::MatrixXd to_eigen(const MomentMatrix& M) {
    const int k = M.m + 1;
    Eigen::MatrixXd A(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) A(i, j) = M.at(i, j);
    return A;
}

double smallest_eigenvalue(const MomentMatrix& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(M));
    return es.eigenvalues().minCoeff();
}

double condition_number(const MomentMatrix& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(M));
    return es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
}

std::vector<double> solve_moment_system(const MomentMatrix& M) {
    const int k = M.m + 1;
    Eigen::MatrixXd A = to_eigen(M);
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
        throw validation_error("solve_moment_system: moment matrix not positive definite");
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(k);
    e0(0) = 1.0;
    Eigen::VectorXd a = llt.solve(e0);
    a = a + llt.solve(e0 - A * a);  // one refinement step
    const double resid = (A * a - e0).cwiseAbs().maxCoeff();
    if (resid > 1e-12 * A.cwiseAbs().maxCoeff() * condition_number(M))
        throw tolerance_error("solve_moment_system: residual too large");
    return std::vector<double>(a.data(), a.data() + k);
}

double Profile1D::operator()(double s) const {
    double P = 0.0;
    for (size_t i = poly.size(); i-- > 0;) P = P * s + poly[i];
    return P * (*bump)(s);
}

double Profile1D::deriv(double s, int r) const {
    // (P psi)^(r) = sum_q C(r,q) P^(q) psi^(r-q); P^(q) evaluated from coefficients.
    double out = 0.0;
    for (int q = 0; q <= r && q < int(poly.size()); ++q) {
        double Pq = 0.0;
        for (int i = q; i < int(poly.size()); ++i) {
            double c = poly[i];
            for (int j = 0; j < q; ++j) c *= (i - j);
            Pq += c * std::pow(s, i - q);
        }
        out += binom(r, q) * Pq * bump->deriv(s, r - q);
    }
    return out;
}

Profile1D build_profile(const BumpSpec& spec, int m) {
    if (m < 0) throw validation_error("build_profile: m must be >= 0");
    Profile1D p;
    p.bump_spec = spec;
    p.m = m;
    p.bump = std::make_shared<Bump>(spec);
    MomentVector mv = compute_moments(spec, 2 * m);
    MomentMatrix M = hankel(mv, m);
    p.hankel_cond = condition_number(M);
    p.poly = solve_moment_system(M);
    p.moment_residuals.resize(m + 1);
    for (int k = 0; k <= m; ++k) {
        double mk = integrate([&](double s) { return std::pow(s, k) * p(s); },
                              spec.a, spec.b, 1e-13);
        p.moment_residuals[k] = std::abs(mk - (k == 0 ? 1.0 : 0.0));
    }
    return p;
}

double ControlProfileFamily::chi(const double* x) const {
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= phi[i](x[i]);
    return v;
}

double ControlProfileFamily::chi_alpha(const MIdx& alpha, const double* x) const {
    double v = (alpha.order() % 2 == 0 ? 1.0 : -1.0) / alpha.fact();
    for (int i = 0; i < n; ++i) v *= phi[i].deriv(x[i], alpha[i]);
    return v;
}

bool ControlProfileFamily::in_box(const double* x) const {
    for (int i = 0; i < n; ++i)
        if (x[i] < boxes[i].a || x[i] > boxes[i].b) return false;
    return true;
}

ControlProfileFamily::Certificate ControlProfileFamily::certify(int order) const {
    if (order < 0) order = m;
    if (order > m)
        throw validation_error("certify: requested order exceeds family order");
    Certificate c;
    c.order = order;
    c.idx = multi_indices(n, order);

    // Per-axis table T[r][j] = ∫ s^j phi^{(r)}(s) ds, so that
    // B_{alpha,beta} = prod_i ((-1)^{alpha_i}/alpha_i!) T_i[alpha_i][beta_i].
    std::vector<std::vector<std::vector<double>>> T(n);
    for (int ax = 0; ax < n; ++ax) {
        T[ax].assign(order + 1, std::vector<double>(order + 1, 0.0));
        for (int r = 0; r <= order; ++r)
            for (int j = 0; j <= order; ++j)
                T[ax][r][j] = integrate(
                    [&](double s) { return std::pow(s, j) * phi[ax].deriv(s, r); },
                    boxes[ax].a, boxes[ax].b, 1e-13);
    }

    const size_t K = c.idx.size();
    c.B.assign(K * K, 0.0);
    for (size_t ia = 0; ia < K; ++ia) {
        const MIdx& al = c.idx[ia];
        for (size_t ib = 0; ib < K; ++ib) {
            const MIdx& be = c.idx[ib];
            double v = 1.0;
            for (int ax = 0; ax < n; ++ax) {
                double sign = (al[ax] % 2 == 0 ? 1.0 : -1.0);
                v *= sign / factorial(al[ax]) * T[ax][al[ax]][be[ax]];
            }
            c.B[ia * K + ib] = v;
            c.max_err = std::max(c.max_err, std::abs(v - (ia == ib ? 1.0 : 0.0)));
        }
    }
    return c;
}

ControlProfileFamily build_chi_family(const std::vector<BumpSpec>& boxes, int m) {
    if (boxes.empty() || boxes.size() > 3)
        throw validation_error("build_chi_family: need 1..3 axes");
    ControlProfileFamily f;
    f.n = int(boxes.size());
    f.m = m;
    f.boxes = boxes;
    f.phi.reserve(f.n);
    for (const auto& b : boxes) f.phi.push_back(build_profile(b, m));
    f.alphas = multi_indices(f.n, m);
    return f;
}

}  // namespace nsd
