#include "nsdecay/control.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace nsd {

SampledFamily::SampledFamily(const ControlProfileFamily& f, const GridSpec& g_,
                             int sub_order_)
    : family(&f), g(g_), sub_order(sub_order_) {
    if (sub_order > f.m)
        throw validation_error("SampledFamily: family order insufficient");
    if (g.n != f.n) throw validation_error("SampledFamily: dimension mismatch");
    alphas = multi_indices(g.n, sub_order);
    const size_t K = alphas.size();
    chi.assign(K, std::vector<double>(g.size(), 0.0));
    const long nn = long(g.size());
    for (size_t q = 0; q < K; ++q) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < nn; ++i) {
            int id[3];
            g.decode(size_t(i), id);
            double x[3];
            for (int a = 0; a < g.n; ++a) x[a] = g.coord(a, id[a]);
            chi[q][i] = f.chi_alpha(alphas[q], x);
        }
    }
    // Discrete Gram D_{beta,alpha}: rectangle-rule moments of the sampled family.
    gram.assign(K * K, 0.0);
    for (size_t ib = 0; ib < K; ++ib)
        for (size_t ia = 0; ia < K; ++ia) {
            gram[ib * K + ia] = k::moment_sum(g, chi[ia], alphas[ib]);
            const double target = (ia == ib) ? 1.0 : 0.0;
            gram_defect = std::max(gram_defect, std::abs(gram[ib * K + ia] - target));
        }
}

std::vector<double> SampledFamily::solve(const std::vector<double>& rhs) const {
    const size_t K = count();
    if (K == 0) return {};
    Eigen::MatrixXd D(K, K);
    for (size_t i = 0; i < K; ++i)
        for (size_t j = 0; j < K; ++j) D(i, j) = gram[i * K + j];
    Eigen::VectorXd b(K);
    for (size_t i = 0; i < K; ++i) b(i) = rhs[i];
    Eigen::VectorXd c = D.partialPivLu().solve(b);
    return std::vector<double>(c.data(), c.data() + K);
}

std::vector<std::vector<double>> tensor_moments(const GridField& u, const GridField& v,
                                                int m) {
    if (!(u.g == v.g)) throw validation_error("tensor_moments: grid mismatch");
    const int n = u.g.n;
    auto alphas = multi_indices(n, m - 1);  // empty loop below when m == 0
    if (m == 0) alphas.clear();
    std::vector<std::vector<double>> M(alphas.size(), std::vector<double>(n * n, 0.0));
    std::vector<double> prod(u.g.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            k::mul(prod, u.phys[i], v.phys[j]);
            for (size_t q = 0; q < alphas.size(); ++q)
                M[q][i * n + j] = k::moment_sum(u.g, prod, alphas[q]);
        }
    return M;
}

GridField assemble_R(const GridField& u, const GridField& v, const SampledFamily& sf,
                     int m, std::vector<std::vector<double>>* coeffs,
                     double* moment_residual) {
    if (!(u.g == v.g)) throw validation_error("assemble_R: grid mismatch");
    const int n = u.g.n;
    if (m > 0 && (sf.family == nullptr || sf.sub_order < m - 1))
        throw validation_error("assemble_R: family order insufficient");
    GridField R(u.g, n * n);
    R.phys.assign(n * n, std::vector<double>(u.g.size()));
    R.has_phys = true;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) k::mul(R.phys[i * n + j], u.phys[i], v.phys[j]);

    std::vector<std::vector<double>> C;
    if (m >= 1) {
        auto M = tensor_moments(u, v, m);
        const size_t K = sf.count();
        C.assign(K, std::vector<double>(n * n, 0.0));
        // per (i,j): solve D c = M for the discrete-consistent coefficients
        for (int ij = 0; ij < n * n; ++ij) {
            std::vector<double> rhs(K);
            for (size_t q = 0; q < K; ++q) rhs[q] = M[q][ij];
            auto c = sf.solve(rhs);
            for (size_t q = 0; q < K; ++q) {
                C[q][ij] = c[q];
                k::axpy(R.phys[ij], -c[q], sf.chi[q]);
            }
        }
    }
    if (coeffs) *coeffs = C;
    if (moment_residual) {
        double scale = 0.0;  // ∫ |u (x) v| (1+|y|)^m dy
        {
            std::vector<double> absm(u.g.size());
            const long nn = long(u.g.size());
#pragma omp parallel for schedule(static)
            for (long i = 0; i < nn; ++i) {
                double s = 0.0;
                for (int c = 0; c < n * n; ++c) {
                    double uv = u.phys[c / n][i] * v.phys[c % n][i];
                    s += uv * uv;
                }
                int id[3];
                u.g.decode(size_t(i), id);
                double r2 = 0.0;
                for (int a = 0; a < n; ++a) {
                    double x = u.g.coord(a, id[a]);
                    r2 += x * x;
                }
                absm[i] = std::sqrt(s) * std::pow(1.0 + std::sqrt(r2), m);
            }
            MIdx zero;
            zero.n = n;
            scale = k::moment_sum(u.g, absm, zero);
        }
        double worst = 0.0;
        for (const auto& be : multi_indices(n, std::max(0, m - 1))) {
            if (m == 0) break;
            for (int ij = 0; ij < n * n; ++ij)
                worst = std::max(worst,
                                 std::abs(k::moment_sum(u.g, R.phys[ij], be)));
        }
        *moment_residual = scale > 0 ? worst / scale : 0.0;
    }
    return R;
}

ForceField assemble_force(const SampledFamily& sf, const MomentSignal& signal) {
    ForceField ff;
    ff.n = signal.n;
    ff.m = signal.m;
    ff.times = signal.times;
    ff.signal = signal;
    const int n = signal.n;
    for (size_t k = 0; k < signal.times.size(); ++k) {
        GridField f = GridField::zeros(sf.g, n * n);
        if (signal.m >= 1) {
            if (signal.alphas.size() != sf.count())
                throw validation_error("assemble_force: signal order does not match family");
            for (size_t q = 0; q < sf.count(); ++q)
                for (int ij = 0; ij < n * n; ++ij)
                    k::axpy(f.phys[ij], signal.A[k][q][ij], sf.chi[q]);
        }
        ff.f.push_back(std::move(f));
    }
    return ff;
}

DecayFit force_decay_report(const ForceField& force, double tlo, double thi) {
    std::vector<double> sups;
    for (const auto& f : force.f) sups.push_back(f.sup());
    DecayFit fit = temporal_exponent_fit(force.times, sups, tlo, thi);
    if (!fit.ok && force.m == 0) fit.note = "zero force (m=0): " + fit.note;
    return fit;
}

}  // namespace nsd
