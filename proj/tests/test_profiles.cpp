#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "nsdecay/profiles.hpp"
#include "nsdecay/quadrature.hpp"

using namespace nsd;

namespace {

// 4th-order central difference, for checking closed-form derivatives.
double fd_deriv(const std::function<double(double)>& f, double s, double h) {
    return (-f(s + 2 * h) + 8 * f(s + h) - 8 * f(s - h) + f(s - 2 * h)) / (12 * h);
}

// Frozen quadrature constants for the reference bump on [-1,1] (normalized,
// mu_0 = 1).  Derived once with the adaptive GL integrator at 1e-14 and pinned.
constexpr double kRawIntegral = 0.4439938161680794378;
constexpr double kMu2 = 0.1581136362637982302;
constexpr double kMu4 = 0.05298181802207716836;
constexpr double kMu6 = 0.02306298678193304710;

}  // namespace

TEST_CASE("bump_raw endpoints and interior values") {
    CHECK(bump_raw(0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(bump_raw(1.0) == 0.0);
    CHECK(bump_raw(-1.0) == 0.0);
    CHECK(bump_raw(1.5) == 0.0);
    CHECK(bump_raw(-3.0) == 0.0);
    // symmetric
    CHECK(bump_raw(0.37) == doctest::Approx(bump_raw(-0.37)).epsilon(1e-15));
}

TEST_CASE("bump_raw_deriv matches finite differences") {
    for (int r = 1; r <= 4; ++r) {
        for (double tau : {-0.8, -0.3, 0.0, 0.45, 0.9}) {
            auto lower = [r](double t) { return bump_raw_deriv(t, r - 1); };
            const double fd = fd_deriv(lower, tau, 1e-4);
            const double ex = bump_raw_deriv(tau, r);
            const double scale = std::max(1.0, std::abs(ex));
            CHECK(std::abs(fd - ex) / scale < 1e-6);
        }
    }
    // derivatives vanish outside the support, flat at the glue points
    CHECK(bump_raw_deriv(1.0, 1) == 0.0);
    CHECK(bump_raw_deriv(-1.2, 3) == 0.0);
}

TEST_CASE("Bump normalization against frozen integral") {
    Bump b({-1.0, 1.0});
    CHECK(b.norm() == doctest::Approx(1.0 / kRawIntegral).epsilon(1e-13));
    // normalized bump integrates to one
    const double total = integrate([&](double s) { return b(s); }, -1.0, 1.0, 1e-13);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Bump affine reparametrization") {
    Bump b({1.0, 4.0});
    const double total = integrate([&](double s) { return b(s); }, 1.0, 4.0, 1e-13);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b(0.9) == 0.0);
    CHECK(b(4.1) == 0.0);
    // chain rule factor (2/(b-a))^r in derivatives
    for (int r = 1; r <= 3; ++r) {
        auto lower = [&, r](double s) { return b.deriv(s, r - 1); };
        const double fd = fd_deriv(lower, 2.2, 1e-4);
        const double ex = b.deriv(2.2, r);
        CHECK(std::abs(fd - ex) / std::max(1.0, std::abs(ex)) < 1e-6);
    }
}

TEST_CASE("compute_moments against frozen values") {
    MomentVector mv = compute_moments({-1.0, 1.0}, 6);
    REQUIRE(mv.lmax == 6);
    CHECK(mv.mu[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(mv.mu[1]) < 1e-14);
    CHECK(std::abs(mv.mu[3]) < 1e-14);
    CHECK(std::abs(mv.mu[5]) < 1e-14);
    CHECK(mv.mu[2] == doctest::Approx(kMu2).epsilon(1e-13));
    CHECK(mv.mu[4] == doctest::Approx(kMu4).epsilon(1e-13));
    CHECK(mv.mu[6] == doctest::Approx(kMu6).epsilon(1e-13));
}

TEST_CASE("hankel matrices are positive definite through m=8") {
    MomentVector mv = compute_moments({-1.0, 1.0}, 16);
    double prev_cond = 0.0;
    for (int m = 0; m <= 8; ++m) {
        MomentMatrix M = hankel(mv, m);
        CHECK(smallest_eigenvalue(M) > 0.0);
        const double c = condition_number(M);
        CHECK(c >= prev_cond);  // nested leading minors: conditioning only grows
        prev_cond = c;
    }
}

TEST_CASE("solve_moment_system low-order closed forms") {
    MomentVector mv = compute_moments({-1.0, 1.0}, 4);
    // m=1: M = [[1,0],[0,mu2]], e0 solve gives a = (1, 0)
    auto a1 = solve_moment_system(hankel(mv, 1));
    REQUIRE(a1.size() == 2);
    CHECK(a1[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(a1[1]) < 1e-13);
    // m=2: 2x2 even block, a0 = mu4/(mu4 - mu2^2), a2 = -mu2/(mu4 - mu2^2)
    auto a2 = solve_moment_system(hankel(mv, 2));
    REQUIRE(a2.size() == 3);
    const double det = mv.mu[4] - mv.mu[2] * mv.mu[2];
    CHECK(a2[0] == doctest::Approx(mv.mu[4] / det).epsilon(1e-12));
    CHECK(std::abs(a2[1]) < 1e-12);
    CHECK(a2[2] == doctest::Approx(-mv.mu[2] / det).epsilon(1e-12));
}

TEST_CASE("solve_moment_system rejects indefinite input") {
    MomentMatrix M;
    M.m = 1;
    M.entries = {1.0, 2.0, 2.0, 1.0};  // eigenvalues 3, -1
    CHECK_THROWS_AS(solve_moment_system(M), validation_error);
}

TEST_CASE("build_profile m=2 against frozen coefficients") {
    Profile1D p = build_profile({-1.0, 1.0}, 2);
    REQUIRE(p.poly.size() == 3);
    CHECK(p.poly[0] == doctest::Approx(1.8934320222018224).epsilon(1e-11));
    CHECK(std::abs(p.poly[1]) < 1e-12);
    CHECK(p.poly[2] == doctest::Approx(-5.6505690673713444).epsilon(1e-11));
    for (double r : p.moment_residuals) CHECK(r < 1e-10);
}

TEST_CASE("build_profile vanishing moments up to m=8") {
    Profile1D p = build_profile({-1.0, 1.0}, 8);
    REQUIRE(p.moment_residuals.size() == 9);
    CHECK(p.moment_residuals[0] < 1e-9);  // ∫ phi = 1
    for (int k = 1; k <= 8; ++k) CHECK(p.moment_residuals[k] < 1e-8);
    // independent re-integration of a couple of moments
    for (int k : {0, 3, 6}) {
        const double mk =
            integrate([&](double s) { return std::pow(s, k) * p(s); }, -1.0, 1.0, 1e-13);
        CHECK(std::abs(mk - (k == 0 ? 1.0 : 0.0)) < 1e-9);
    }
}

TEST_CASE("Profile1D derivative via Leibniz matches finite differences") {
    Profile1D p = build_profile({-1.0, 1.0}, 3);
    for (int r = 1; r <= 3; ++r) {
        for (double s : {-0.7, -0.2, 0.1, 0.6}) {
            auto lower = [&, r](double t) { return p.deriv(t, r - 1); };
            const double fd = fd_deriv(lower, s, 1e-4);
            const double ex = p.deriv(s, r);
            CHECK(std::abs(fd - ex) / std::max(1.0, std::abs(ex)) < 1e-6);
        }
    }
    CHECK(p.deriv(1.0, 2) == 0.0);
    CHECK(p.deriv(-1.4, 1) == 0.0);
}

TEST_CASE("chi family biorthogonality certificate") {
    std::vector<BumpSpec> boxes{{-1.0, 1.0}, {-1.0, 1.0}};
    for (int m : {0, 1, 3}) {
        ControlProfileFamily fam = build_chi_family(boxes, m);
        auto cert = fam.certify();
        CHECK(cert.max_err < 1e-8);
        // enumeration contract: certificate rows follow multi_indices(n, order)
        auto idx = multi_indices(2, m);
        REQUIRE(cert.idx.size() == idx.size());
        for (size_t i = 0; i < idx.size(); ++i) CHECK(cert.idx[i] == idx[i]);
    }
}

TEST_CASE("chi support and in_box") {
    std::vector<BumpSpec> boxes{{-1.0, 1.0}, {-0.5, 0.5}};
    ControlProfileFamily fam = build_chi_family(boxes, 2);
    const double inside[2] = {0.3, 0.1};
    const double outside1[2] = {1.2, 0.0};
    const double outside2[2] = {0.0, 0.6};
    CHECK(fam.in_box(inside));
    CHECK(!fam.in_box(outside1));
    CHECK(!fam.in_box(outside2));
    CHECK(fam.chi(outside1) == 0.0);
    CHECK(fam.chi(outside2) == 0.0);
    for (const auto& a : fam.alphas) {
        CHECK(fam.chi_alpha(a, outside1) == 0.0);
        CHECK(fam.chi_alpha(a, outside2) == 0.0);
    }
}

TEST_CASE("chi_alpha is the signed scaled derivative of chi") {
    std::vector<BumpSpec> boxes{{-1.0, 1.0}, {-1.0, 1.0}};
    ControlProfileFamily fam = build_chi_family(boxes, 2);
    MIdx a;
    a.n = 2;
    a.a = {1, 0, 0};
    // chi_{(1,0)}(x) = -∂_1 chi(x)
    const double x[2] = {0.25, -0.4};
    const double h = 1e-5;
    double xp[2] = {x[0] + h, x[1]}, xm[2] = {x[0] - h, x[1]};
    const double fd = (fam.chi(xp) - fam.chi(xm)) / (2 * h);
    CHECK(fam.chi_alpha(a, x) == doctest::Approx(-fd).epsilon(1e-6));
}
