#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <tuple>
#include <vector>

#include "nsdecay/grid.hpp"
#include "nsdecay/heat_kernel.hpp"
#include "nsdecay/kernels.hpp"
#include "nsdecay/oseen.hpp"

using namespace nsd;

TEST_CASE("hermite polynomials satisfy the classical values") {
    CHECK(hermite(0, 0.7) == 1.0);
    CHECK(hermite(1, 0.7) == doctest::Approx(1.4).epsilon(1e-15));
    CHECK(hermite(2, 0.7) == doctest::Approx(4 * 0.49 - 2).epsilon(1e-14));
    CHECK(hermite(3, 0.7) == doctest::Approx(8 * std::pow(0.7, 3) - 12 * 0.7).epsilon(1e-14));
}

TEST_CASE("heat kernel 1d normalization and first-derivative identity") {
    const double t = 0.37;
    CHECK(heat_kernel_deriv_1d(0.0, t, 0) ==
          doctest::Approx(1.0 / std::sqrt(4 * M_PI * t)).epsilon(1e-14));
    // ∂_x g = -(x/2t) g
    for (double x : {-1.3, -0.2, 0.5, 2.0}) {
        const double g = heat_kernel_deriv_1d(x, t, 0);
        CHECK(heat_kernel_deriv_1d(x, t, 1) == doctest::Approx(-(x / (2 * t)) * g).epsilon(1e-13));
    }
    // mass is one
    double mass = 0.0;
    const double h = 0.01;
    for (double x = -12.0; x <= 12.0; x += h) mass += h * heat_kernel_deriv_1d(x, t, 0);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("heat kernel derivatives match finite differences") {
    const double t = 0.21;
    for (int k = 1; k <= 3; ++k) {
        for (double x : {-0.9, 0.3, 1.1}) {
            const double h = 1e-5;
            const double fd = (heat_kernel_deriv_1d(x + h, t, k - 1) -
                               heat_kernel_deriv_1d(x - h, t, k - 1)) /
                              (2 * h);
            CHECK(heat_kernel_deriv_1d(x, t, k) == doctest::Approx(fd).epsilon(1e-7));
        }
    }
}

TEST_CASE("tensor heat kernel factorizes") {
    const double x[2] = {0.4, -0.8};
    const double t = 0.5;
    CHECK(heat_kernel(x, 2, t) ==
          doctest::Approx(heat_kernel_deriv_1d(x[0], t, 0) * heat_kernel_deriv_1d(x[1], t, 0))
              .epsilon(1e-14));
    MIdx a;
    a.n = 2;
    a.a = {2, 1, 0};
    CHECK(heat_kernel_deriv(x, 2, t, a) ==
          doctest::Approx(heat_kernel_deriv_1d(x[0], t, 2) * heat_kernel_deriv_1d(x[1], t, 1))
              .epsilon(1e-14));
}

TEST_CASE("heat semigroup property on the grid") {
    GridSpec g(2, 64, 6.0);
    GridField f(g, 2);
    f.phys.assign(2, std::vector<double>(g.size()));
    for (size_t i = 0; i < g.size(); ++i) {
        int id[3];
        g.decode(i, id);
        const double x = g.coord(0, id[0]), y = g.coord(1, id[1]);
        f.phys[0][i] = std::exp(-2.0 * (x * x + y * y));
        f.phys[1][i] = x * std::exp(-(x * x + y * y));
    }
    f.has_phys = true;
    GridField one = heat_evolve(heat_evolve(f, 0.3), 0.45);
    GridField two = heat_evolve(f, 0.75);
    double worst = 0.0;
    for (int c = 0; c < 2; ++c)
        for (size_t i = 0; i < g.size(); ++i)
            worst = std::max(worst, std::abs(one.phys[c][i] - two.phys[c][i]));
    CHECK(worst < 1e-13);
}

TEST_CASE("heat_evolve at t=0 is the identity") {
    GridSpec g(2, 32, 4.0);
    GridField f(g, 1);
    f.phys.assign(1, std::vector<double>(g.size()));
    for (size_t i = 0; i < g.size(); ++i) f.phys[0][i] = std::sin(0.37 * i);
    f.has_phys = true;
    GridField out = heat_evolve(f, 0.0);
    double worst = 0.0;
    for (size_t i = 0; i < g.size(); ++i)
        worst = std::max(worst, std::abs(out.phys[0][i] - f.phys[0][i]));
    CHECK(worst < 1e-14);
}

TEST_CASE("Oseen profile symmetry and solenoidality") {
    OseenProfile p = build_oseen_profile(2, 128, 24.0);

    // Phi_{j;k,l} is odd under x -> -x (the symbol is odd in xi).
    const GridSpec& g = p.g;
    const int N = g.dims[0];
    double odd_err = 0.0, scale = 0.0;
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) {
                const auto& c = p.at(j, k, l);
                for (int i0 = 1; i0 < N; ++i0)
                    for (int i1 = 1; i1 < N; ++i1) {
                        const size_t a = static_cast<size_t>(i0) * N + i1;
                        const size_t b =
                            static_cast<size_t>(N - i0) * N + (N - i1);
                        odd_err = std::max(odd_err, std::abs(c[a] + c[b]));
                        scale = std::max(scale, std::abs(c[a]));
                    }
            }
    CHECK(scale > 0.0);
    CHECK(odd_err / scale < 1e-12);

    // For each (k,l), the j-vector field Phi_{.;k,l} is divergence-free.
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            GridField v(g, 2);
            v.phys = {p.at(0, k, l), p.at(1, k, l)};
            v.has_phys = true;
            CHECK(max_divergence(v) < 1e-10 * std::max(1.0, p.phi_sup));
        }

    // Every component integrates to ~0 (the symbol vanishes at xi = 0).
    const double cell = g.cell();
    for (int j = 0; j < 2; ++j) {
        double total = 0.0;
        for (double s : p.at(j, 0, 0)) total += s * cell;
        CHECK(std::abs(total) < 1e-10);
    }
}

TEST_CASE("eval_F respects the parabolic scaling") {
    OseenProfile p = build_oseen_profile(2, 128, 24.0);
    // F(x,4) = 4^{-3/2} Phi(x/2): compare interpolated values against the
    // profile rescaled by hand, well inside the window.
    const double t = 4.0;
    double out[8];
    for (double r : {1.0, 2.5, 5.0}) {
        const double x[2] = {r, 0.6 * r};
        eval_F(p, x, t, out);
        const double xs[2] = {x[0] / 2.0, x[1] / 2.0};
        double ref[8];
        eval_F(p, xs, 1.0, ref);
        for (int c = 0; c < 8; ++c)
            CHECK(out[c] == doctest::Approx(std::pow(t, -1.5) * ref[c]).epsilon(1e-10));
        CHECK(eval_F_frob(p, x, t) ==
              doctest::Approx(std::pow(t, -1.5) * eval_F_frob(p, xs, 1.0)).epsilon(1e-10));
    }
}

TEST_CASE("Oseen synthesis re-check at doubled resolution") {
    OseenProfile lo = build_oseen_profile(2, 128, 24.0);
    OseenProfile hi = build_oseen_profile(2, 256, 24.0);
    // the two grids share every coarse node, so the synthesized values can be
    // compared directly, free of interpolation error
    double worst = 0.0;
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) {
                const auto& c = lo.at(j, k, l);
                const auto& f = hi.at(j, k, l);
                for (int i0 = 0; i0 < 128; ++i0)
                    for (int i1 = 0; i1 < 128; ++i1)
                        worst = std::max(worst,
                                         std::abs(c[static_cast<size_t>(i0) * 128 + i1] -
                                                  f[static_cast<size_t>(2 * i0) * 256 + 2 * i1]));
            }
    CHECK(worst < 1e-8 * std::max(1.0, hi.phi_sup));
}

TEST_CASE("kernel bounds report: L1 scaling law") {
    OseenProfile p = build_oseen_profile(2, 128, 24.0);
    KernelEstimateReport rep = kernel_bounds_report(p, {0.5, 1.0, 2.0, 4.0});
    REQUIRE(rep.l1_scaled.size() == 4);
    // ||F(.,t)||_L1 = t^{-1/2} ||Phi||_L1 on the self-similar window
    CHECK(rep.l1_spread < 0.005);
    CHECK(rep.usugt_const > 0.0);
    CHECK(rep.usugt0_const > 0.0);
}

TEST_CASE("parallel and serial kernels agree bitwise") {
    GridSpec g(2, 64, 8.0);
    const size_t sz = g.size();
    std::vector<double> a(sz), b(sz);
    std::vector<cplx> s(sz);
    for (size_t i = 0; i < sz; ++i) {
        a[i] = std::sin(0.1 * i) + 0.3;
        b[i] = std::cos(0.07 * i);
        s[i] = cplx(std::sin(0.05 * i), std::cos(0.11 * i));
    }

    auto run = [&](bool par) {
        const bool saved = parallel_enabled();
        parallel_enabled() = par;
        std::vector<double> y = b, z(sz);
        std::vector<cplx> c = s;
        std::vector<std::vector<cplx>> vec{c, c};
        k::axpy(y, 0.37, a);
        k::mul(z, a, y);
        k::scale(z, 1.7);
        k::heat_multiply(g, c, 0.25);
        k::deriv_multiply(g, c, 0);
        k::dealias(g, c);
        k::leray(g, vec);
        parallel_enabled() = saved;
        return std::make_tuple(z, c, vec);
    };
    auto [z_par, c_par, v_par] = run(true);
    auto [z_ser, c_ser, v_ser] = run(false);
    CHECK(z_par == z_ser);
    CHECK(c_par == c_ser);
    CHECK(v_par == v_ser);
}
