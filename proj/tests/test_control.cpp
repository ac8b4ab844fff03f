#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nsdecay/control.hpp"
#include "nsdecay/field.hpp"
#include "nsdecay/norms.hpp"
#include "nsdecay/profiles.hpp"

using namespace nsd;

namespace {

// Shifted Gaussian pair, component 1 zeroed so tensor moments have a closed form.
GridField gaussian_comp0(const GridSpec& g, double cx, double cy, double w) {
    GridField f = GridField::zeros(g, 2);
    for (size_t i = 0; i < g.size(); ++i) {
        int id[3];
        g.decode(i, id);
        const double x = g.coord(0, id[0]) - cx, y = g.coord(1, id[1]) - cy;
        f.phys[0][i] = std::exp(-(x * x + y * y) / w);
    }
    return f;
}

// Smooth random field: a few Gaussian blobs per component, centers well inside
// the box so periodization error stays far below the moment tolerances.
GridField random_blobs(const GridSpec& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> pos(-1.2, 1.2), wid(0.4, 1.0),
        amp(-1.0, 1.0);
    GridField f = GridField::zeros(g, 2);
    for (int c = 0; c < 2; ++c)
        for (int b = 0; b < 3; ++b) {
            const double cx = pos(rng), cy = pos(rng), w = wid(rng), a = amp(rng);
            for (size_t i = 0; i < g.size(); ++i) {
                int id[3];
                g.decode(i, id);
                const double x = g.coord(0, id[0]) - cx, y = g.coord(1, id[1]) - cy;
                f.phys[c][i] += a * std::exp(-(x * x + y * y) / w);
            }
        }
    return f;
}

std::vector<BumpSpec> unit_boxes() { return {BumpSpec(1.0, 3.0), BumpSpec(1.0, 3.0)}; }

}  // namespace

TEST_CASE("tensor moments of a shifted Gaussian match the closed form") {
    GridSpec g(2, 128, 8.0);
    const double cx = 0.4, cy = -0.7, w = 1.0;
    GridField u = gaussian_comp0(g, cx, cy, w);
    auto M = tensor_moments(u, u, 2);  // |alpha| <= 1
    REQUIRE(M.size() == 3);
    // product is exp(-2|y-c|^2/w): mass pi*w/2, first moments c_i * mass
    const double mass = M_PI * w / 2.0;
    CHECK(M[0][0] == doctest::Approx(mass).epsilon(1e-12));
    CHECK(M[1][0] == doctest::Approx(cx * mass).epsilon(1e-11));
    CHECK(M[2][0] == doctest::Approx(cy * mass).epsilon(1e-11));
    // zeroed component kills every other entry exactly
    for (size_t q = 0; q < M.size(); ++q)
        for (int ij = 1; ij < 4; ++ij) CHECK(M[q][ij] == 0.0);
    CHECK(tensor_moments(u, u, 0).empty());
    CHECK(tensor_moments(u, u, 1).size() == 1);
}

TEST_CASE("odd moments of an even product cancel on the symmetric grid") {
    GridSpec g(2, 128, 8.0);
    GridField u = gaussian_comp0(g, 0.0, 0.0, 1.0);
    auto M = tensor_moments(u, u, 3);  // includes |alpha| = 2
    auto alphas = multi_indices(2, 2);
    REQUIRE(M.size() == alphas.size());
    const double mass = M_PI / 2.0;
    for (size_t q = 0; q < alphas.size(); ++q) {
        // radial integrand: the moment survives only when each exponent is even
        if (alphas[q].a[0] % 2 == 0 && alphas[q].a[1] % 2 == 0)
            CHECK(std::abs(M[q][0]) > 1e-3 * mass);
        else
            CHECK(std::abs(M[q][0]) < 1e-14 * mass);
    }
}

TEST_CASE("assemble_R with m=0 is the bare tensor product") {
    GridSpec g(2, 64, 8.0);
    GridField u = random_blobs(g, 11), v = random_blobs(g, 22);
    SampledFamily sf(build_chi_family(unit_boxes(), 1), g, 0);
    std::vector<std::vector<double>> C;
    double res = -1.0;
    GridField R = assemble_R(u, v, sf, 0, &C, &res);
    CHECK(C.empty());
    CHECK(res == 0.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            std::vector<double> prod(g.size());
            k::mul(prod, u.phys[i], v.phys[j]);
            CHECK(k::max_abs_diff(R.phys[i * 2 + j], prod) == 0.0);
        }
}

TEST_CASE("subtracted tensor kills discrete moments below order m and no more") {
    GridSpec g(2, 128, 8.0);
    GridField u = random_blobs(g, 101), v = random_blobs(g, 202);
    for (int m = 1; m <= 3; ++m) {
        CAPTURE(m);
        SampledFamily sf(build_chi_family(unit_boxes(), m), g, m - 1);
        std::vector<std::vector<double>> C;
        double res = -1.0;
        GridField R = assemble_R(u, v, sf, m, &C, &res);
        REQUIRE(C.size() == sf.count());
        CHECK(res >= 0.0);
        CHECK(res < 5e-12);  // relative to the weighted L1 of u (x) v
        // independent rectangle sums over the returned field
        auto M = tensor_moments(u, v, m);
        double scale = 0.0;
        for (const auto& row : M)
            for (double e : row) scale = std::max(scale, std::abs(e));
        REQUIRE(scale > 1e-6);
        auto betas = multi_indices(2, m - 1);
        for (const auto& be : betas)
            for (int ij = 0; ij < 4; ++ij)
                CHECK(std::abs(k::moment_sum(g, R.phys[ij], be)) < 1e-10 * scale);
        // order-m moments are generically untouched
        double top = 0.0;
        for (const auto& be : multi_indices(2, m))
            if (be.order() == m)
                for (int ij = 0; ij < 4; ++ij)
                    top = std::max(top, std::abs(k::moment_sum(g, R.phys[ij], be)));
        CHECK(top > 1e-6 * scale);
    }
}

TEST_CASE("assemble_R is bilinear") {
    GridSpec g(2, 64, 8.0);
    GridField u = random_blobs(g, 5), v = random_blobs(g, 6);
    GridField us = u, vs = v;
    for (int c = 0; c < 2; ++c) {
        k::scale(us.phys[c], 2.0);
        k::scale(vs.phys[c], -3.0);
    }
    SampledFamily sf(build_chi_family(unit_boxes(), 2), g, 1);
    std::vector<std::vector<double>> C1, C2;
    GridField R1 = assemble_R(u, v, sf, 2, &C1);
    GridField R2 = assemble_R(us, vs, sf, 2, &C2);
    double sup = R1.sup(), worst = 0.0;
    for (int ij = 0; ij < 4; ++ij)
        for (size_t i = 0; i < g.size(); ++i)
            worst = std::max(worst, std::abs(R2.phys[ij][i] + 6.0 * R1.phys[ij][i]));
    CHECK(worst < 1e-12 * sup);
    for (size_t q = 0; q < C1.size(); ++q)
        for (int ij = 0; ij < 4; ++ij)
            CHECK(C2[q][ij] == doctest::Approx(-6.0 * C1[q][ij]).epsilon(1e-11));
}

TEST_CASE("assemble_force reproduces the signal on the boxes and vanishes outside") {
    GridSpec g(2, 64, 8.0);
    auto fam = build_chi_family(unit_boxes(), 2);
    SampledFamily sf(fam, g, 1);
    MomentSignal sig;
    sig.n = 2;
    sig.m = 2;
    sig.alphas = sf.alphas;
    sig.times = {1.0, 2.5};
    sig.A.assign(2, std::vector<std::vector<double>>(sf.count(),
                                                     std::vector<double>(4, 0.0)));
    for (size_t k = 0; k < 2; ++k)
        for (size_t q = 0; q < sf.count(); ++q)
            for (int ij = 0; ij < 4; ++ij)
                sig.A[k][q][ij] = 0.1 * double(k + 1) + 0.01 * double(q) - 0.003 * ij;
    ForceField ff = assemble_force(sf, sig);
    REQUIRE(ff.f.size() == 2);
    CHECK(ff.times == sig.times);
    CHECK(ff.m == 2);
    double inside_sup = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
        int id[3];
        g.decode(i, id);
        double x[2] = {g.coord(0, id[0]), g.coord(1, id[1])};
        const bool in = fam.in_box(x);
        for (size_t k = 0; k < 2; ++k)
            for (int ij = 0; ij < 4; ++ij) {
                const double got = ff.f[k].phys[ij][i];
                if (!in) {
                    CHECK(got == 0.0);  // chi supports pin the force support exactly
                } else {
                    double want = 0.0;
                    for (size_t q = 0; q < sf.count(); ++q)
                        want += sig.A[k][q][ij] * sf.chi[q][i];
                    CHECK(got == doctest::Approx(want).epsilon(1e-13));
                    inside_sup = std::max(inside_sup, std::abs(got));
                }
            }
    }
    CHECK(inside_sup > 0.0);
}

TEST_CASE("m=0 signal gives the zero force and an honestly rejected fit") {
    GridSpec g(2, 32, 8.0);
    SampledFamily sf(build_chi_family(unit_boxes(), 1), g, 0);
    MomentSignal sig;
    sig.n = 2;
    sig.m = 0;
    sig.times = {1.0, 2.0, 4.0, 8.0};
    sig.A.assign(sig.times.size(), {});
    ForceField ff = assemble_force(sf, sig);
    for (const auto& f : ff.f) CHECK(f.sup() == 0.0);
    DecayFit fit = force_decay_report(ff, 1.0, 8.0);
    CHECK(!fit.ok);
    CHECK(fit.note.find("zero force") == 0);
}

TEST_CASE("discrete Gram converges to the identity and solve inverts it") {
    // Sub-order 0 (the production m=1 path): sampled biorthonormality converges
    // root-exponentially once the box is resolved.
    auto fam1 = build_chi_family(unit_boxes(), 1);
    SampledFamily coarse(fam1, GridSpec(2, 128, 8.0), 0);
    SampledFamily fine(fam1, GridSpec(2, 256, 8.0), 0);
    CHECK(coarse.gram_defect < 1e-3);
    CHECK(fine.gram_defect < 1e-5);
    CHECK(fine.gram_defect < 0.1 * coarse.gram_defect);
    // Higher-order sampled Grams drift far from the identity at dx = 0.125; the
    // moment kill above works because assemble_R solves against the *discrete*
    // Gram, not the continuum one. The solve itself must stay an exact inverse.
    GridSpec g(2, 128, 8.0);
    SampledFamily sf(build_chi_family(unit_boxes(), 3), g, 2);
    const size_t K = sf.count();
    REQUIRE(K == multi_indices(2, 2).size());
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> rhs(K);
    for (double& r : rhs) r = dist(rng);
    auto c = sf.solve(rhs);
    REQUIRE(c.size() == K);
    for (size_t i = 0; i < K; ++i) {
        double acc = 0.0;
        for (size_t j = 0; j < K; ++j) acc += sf.gram[i * K + j] * c[j];
        CHECK(acc == doctest::Approx(rhs[i]).epsilon(1e-12));
    }
}

TEST_CASE("control validation guards") {
    GridSpec g(2, 32, 8.0);
    auto fam = build_chi_family(unit_boxes(), 1);
    CHECK_THROWS_AS(SampledFamily(fam, g, 2), validation_error);
    GridField u = gaussian_comp0(g, 0.0, 0.0, 1.0);
    SampledFamily sf(fam, g, 0);
    CHECK_THROWS_AS(assemble_R(u, u, sf, 2), validation_error);
    GridSpec g2(2, 64, 8.0);
    GridField v = gaussian_comp0(g2, 0.0, 0.0, 1.0);
    CHECK_THROWS_AS(tensor_moments(u, v, 1), validation_error);
    CHECK_THROWS_AS(assemble_R(u, v, sf, 0), validation_error);
}
