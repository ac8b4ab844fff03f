#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nsdecay/datum.hpp"
#include "nsdecay/field.hpp"
#include "nsdecay/norms.hpp"

using namespace nsd;

namespace {

GridField gaussian_pair(const GridSpec& g) {
    GridField f(g, 2);
    f.phys.assign(2, std::vector<double>(g.size()));
    for (size_t i = 0; i < g.size(); ++i) {
        int id[3];
        g.decode(i, id);
        const double x = g.coord(0, id[0]), y = g.coord(1, id[1]);
        f.phys[0][i] = std::exp(-1.3 * (x * x + y * y));
        f.phys[1][i] = (x - 0.2) * std::exp(-(x * x + 0.8 * y * y));
    }
    f.has_phys = true;
    return f;
}

}  // namespace

TEST_CASE("Parseval identity for the transform convention") {
    GridSpec g(2, 64, 5.0);
    GridField f = gaussian_pair(g);
    GridField spec = f;
    spec.ensure_spec();
    // ∫ |f|^2 dx = (2L)^n Σ |c_k|^2 with the 1/N^n forward scaling
    for (int c = 0; c < 2; ++c) {
        double phys = 0.0;
        for (double v : f.phys[c]) phys += v * v * g.cell();
        double freq = 0.0;
        for (const cplx& z : spec.spec[c]) freq += std::norm(z);
        freq *= std::pow(2.0 * g.L, 2);
        CHECK(phys == doctest::Approx(freq).epsilon(1e-12));
    }
}

TEST_CASE("spectral round trip is exact") {
    GridSpec g(2, 32, 3.0);
    GridField f = gaussian_pair(g);
    GridField r = f;
    r.ensure_spec();
    r.drop_phys();
    r.ensure_phys();
    double worst = 0.0;
    for (int c = 0; c < 2; ++c)
        for (size_t i = 0; i < g.size(); ++i)
            worst = std::max(worst, std::abs(r.phys[c][i] - f.phys[c][i]));
    CHECK(worst < 1e-13);
}

TEST_CASE("Leray projection annihilates gradients and fixes solenoidal fields") {
    GridSpec g(2, 64, 4.0);
    // gradient field: grad(exp(-2r^2))
    GridField grad(g, 2);
    grad.phys.assign(2, std::vector<double>(g.size()));
    // solenoidal field: grad^perp(psi)
    GridField sol(g, 2);
    sol.phys.assign(2, std::vector<double>(g.size()));
    for (size_t i = 0; i < g.size(); ++i) {
        int id[3];
        g.decode(i, id);
        const double x = g.coord(0, id[0]), y = g.coord(1, id[1]);
        const double e = std::exp(-2.0 * (x * x + y * y));
        grad.phys[0][i] = -4.0 * x * e;
        grad.phys[1][i] = -4.0 * y * e;
        sol.phys[0][i] = -(-4.0 * y * e);
        sol.phys[1][i] = -4.0 * x * e;
    }
    grad.has_phys = sol.has_phys = true;

    GridField pg = leray_project(grad);
    double sup = 0.0;
    for (int c = 0; c < 2; ++c)
        for (double v : pg.phys[c]) sup = std::max(sup, std::abs(v));
    CHECK(sup < 1e-12);

    GridField ps = leray_project(sol);
    double diff = 0.0;
    for (int c = 0; c < 2; ++c)
        for (size_t i = 0; i < g.size(); ++i)
            diff = std::max(diff, std::abs(ps.phys[c][i] - sol.phys[c][i]));
    CHECK(diff < 1e-12);
    CHECK(max_divergence(ps) < 1e-12);

    // idempotent
    GridField pp = leray_project(pg);
    for (int c = 0; c < 2; ++c)
        for (size_t i = 0; i < g.size(); ++i)
            CHECK(std::abs(pp.phys[c][i] - pg.phys[c][i]) < 1e-14);
}

TEST_CASE("derivative operator matches the analytic gradient") {
    GridSpec g(2, 64, 6.0);
    GridField f(g, 1);
    f.phys.assign(1, std::vector<double>(g.size()));
    for (size_t i = 0; i < g.size(); ++i) {
        int id[3];
        g.decode(i, id);
        const double x = g.coord(0, id[0]), y = g.coord(1, id[1]);
        f.phys[0][i] = std::exp(-1.5 * (x * x + y * y));
    }
    f.has_phys = true;
    GridField dx = derivative(f, 0);
    double worst = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
        int id[3];
        g.decode(i, id);
        const double x = g.coord(0, id[0]), y = g.coord(1, id[1]);
        const double exact = -3.0 * x * std::exp(-1.5 * (x * x + y * y));
        worst = std::max(worst, std::abs(dx.phys[0][i] - exact));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("initial datum rejects a support that crowds the box") {
    GridSpec g(2, 64, 8.0);
    DatumSpec spec;
    spec.width = 2.5;  // >= L/4
    CHECK_THROWS_AS(make_initial_datum(g, spec), validation_error);
}

TEST_CASE("initial datum certificate: moments, divergence, amplitude") {
    // The sampled stream-function datum has discrete moments that vanish only
    // up to the sampling (rectangle-rule) error of the even-derivative sums,
    // which shrinks root-exponentially with resolution. Pin that contract:
    // parity-exact orders are at machine precision, the rest improve by a
    // large factor per refinement and are already small at N=256.
    double prev[3] = {0, 0, 0};
    for (int N : {128, 256}) {
        GridSpec g(2, N, 12.0);
        for (int m : {0, 1, 2}) {
            DatumSpec spec;
            spec.m = m;
            spec.width = 2.5;
            spec.amplitude = 0.05;
            DatumCertificate cert;
            GridField u0 = make_initial_datum(g, spec, &cert);
            // solenoidal exactly, in the discrete sense, at any resolution
            CHECK(cert.max_div < 1e-12);
            CHECK(max_divergence(u0) < 1e-12 * spec.amplitude);
            CHECK(cert.sup == doctest::Approx(spec.amplitude).epsilon(1e-12));
            CHECK(cert.sharp_moment > 5e-4);  // order is exactly m, not higher
            if (m == 0) CHECK(cert.max_moment < 1e-12);  // parity-exact
            if (N == 256) {
                CHECK(cert.max_moment < (m == 2 ? 2e-3 : 5e-4));
                if (m > 0) CHECK(cert.max_moment < 0.25 * prev[m]);
                // the projection moves samples at the junk level only
                double sup = 0.0;
                for (int c = 0; c < 2; ++c)
                    for (double v : u0.phys[c]) sup = std::max(sup, std::abs(v));
                CHECK(std::abs(sup - spec.amplitude) < 2e-3 * spec.amplitude);
            }
            prev[m] = cert.max_moment;
        }
    }
}

TEST_CASE("free heat evolution matches the spectral solver before wraparound") {
    // heat_evolve (periodic, spectral) against FreeHeatDatum (free space,
    // Gauss-Legendre convolution): independent discretizations of the same
    // evolution. The agreement floor is the aliasing of the sampled bump
    // derivatives, which is why the m=1 tolerance is looser.
    GridSpec g(2, 256, 6.0);
    for (int m : {0, 1}) {
        DatumSpec spec;
        spec.m = m;
        spec.width = 2.0;
        spec.amplitude = 1.0;
        FreeHeatDatum ref(spec);
        const Bump& b = ref.bump;
        GridField u0(g, 2);
        u0.phys.assign(2, std::vector<double>(g.size()));
        for (size_t i = 0; i < g.size(); ++i) {
            int id[3];
            g.decode(i, id);
            const double x = g.coord(0, id[0]), y = g.coord(1, id[1]);
            u0.phys[0][i] = -b.deriv(x, spec.m) * b.deriv(y, 1);
            u0.phys[1][i] = b.deriv(x, spec.m + 1) * b(y);
        }
        u0.has_phys = true;
        const double t = 0.4;
        GridField ut = heat_evolve(u0, t);
        double worst = 0.0, scale = 0.0;
        for (size_t i = 0; i < g.size(); i += 7) {
            int id[3];
            g.decode(i, id);
            const double x[2] = {g.coord(0, id[0]), g.coord(1, id[1])};
            double uref[2];
            ref.eval(x, t, uref);
            worst = std::max(worst, std::abs(ut.phys[0][i] - uref[0]));
            worst = std::max(worst, std::abs(ut.phys[1][i] - uref[1]));
            scale = std::max(scale, std::abs(uref[0]));
        }
        CHECK(scale > 0.0);
        CHECK(worst < (m == 0 ? 1e-5 : 5e-4) * scale);
    }
}

TEST_CASE("tail exponent fit recovers a synthetic power law") {
    GridSpec g(2, 256, 24.0);
    GridField f(g, 1);
    f.phys.assign(1, std::vector<double>(g.size()));
    for (size_t i = 0; i < g.size(); ++i) {
        int id[3];
        g.decode(i, id);
        const double x = g.coord(0, id[0]), y = g.coord(1, id[1]);
        const double r2 = x * x + y * y;
        f.phys[0][i] = std::pow(0.01 + r2, -2.5);  // ~ r^-5 in the far field
    }
    f.has_phys = true;
    DecayFit fit = tail_exponent_fit(f, 2.0, 6.0, 12);
    REQUIRE(fit.ok);
    CHECK(fit.slope == doctest::Approx(-5.0).epsilon(0.02));
    CHECK(fit.r2 > 0.9998);
}

TEST_CASE("tail exponent fit rejects windows beyond the trusted radius") {
    GridSpec g(2, 64, 8.0);
    GridField f = gaussian_pair(g);
    CHECK_THROWS_AS(tail_exponent_fit(f, 1.0, 3.0 * g.L, 12), validation_error);
}

TEST_CASE("weighted sup of the exact envelope is one") {
    GridSpec g(2, 128, 10.0);
    for (int m : {0, 1, 2}) {
        GridField f(g, 1);
        f.phys.assign(1, std::vector<double>(g.size()));
        for (size_t i = 0; i < g.size(); ++i) {
            int id[3];
            g.decode(i, id);
            const double x = g.coord(0, id[0]), y = g.coord(1, id[1]);
            const double r = std::sqrt(x * x + y * y);
            f.phys[0][i] = std::pow(1.0 + r, -(3.0 + m));
        }
        f.has_phys = true;
        CHECK(weighted_sup_field(f, m, g.L) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("radial shell maxima are monotone for a radial decreasing field") {
    GridSpec g(2, 128, 8.0);
    GridField f(g, 1);
    f.phys.assign(1, std::vector<double>(g.size()));
    for (size_t i = 0; i < g.size(); ++i) {
        int id[3];
        g.decode(i, id);
        const double x = g.coord(0, id[0]), y = g.coord(1, id[1]);
        f.phys[0][i] = 1.0 / (1.0 + x * x + y * y);
    }
    f.has_phys = true;
    auto shells = radial_shell_max(f, 1.0, 4.0, 10);
    REQUIRE(shells.size() >= 8);
    for (size_t i = 1; i < shells.size(); ++i) {
        CHECK(shells[i].first > shells[i - 1].first);
        CHECK(shells[i].second < shells[i - 1].second);
    }
}

TEST_CASE("fit_loglog flags degenerate input") {
    std::vector<double> xs{1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0};
    std::vector<double> ys(xs.size(), 1e-20);  // below the floor
    DecayFit fit = fit_loglog(xs, ys);
    CHECK(!fit.ok);
}
