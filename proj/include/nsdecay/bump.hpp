#pragma once

#include <cmath>
#include <vector>

#include "nsdecay/common.hpp"
#include "nsdecay/quadrature.hpp"

namespace nsd {

// Standard C-infinity bump on [a,b]: psi(s) = c * exp(-1/(1-tau^2)) in the affine
// coordinate tau of [a,b], normalized so the integral is 1.
struct BumpSpec {
    double a = -1.0, b = 1.0;
    BumpSpec() = default;
    BumpSpec(double a_, double b_) : a(a_), b(b_) {
        if (!(a < b)) throw validation_error("BumpSpec: need a < b");
    }
};

// Derivatives of E(tau) = exp(-1/(1-tau^2)) have the closed form
//   E^(r)(tau) = N_r(tau) / (1-tau^2)^{2r} * E(tau),
// with polynomials obeying N_{r+1} = (N_r'(1-t^2) + 4 r t N_r)(1-t^2) - 2 t N_r.
namespace detail {
inline const std::vector<double>& bump_poly(int r) {
    static std::vector<std::vector<double>> polys = [] {
        std::vector<std::vector<double>> p;
        p.push_back({1.0});  // N_0
        for (int r = 0; r < 24; ++r) {
            const auto& N = p.back();
            const int d = int(N.size()) - 1;
            std::vector<double> q(d + 4, 0.0);
            // (N' * (1-t^2) + 4 r t N) * (1-t^2) - 2 t N
            std::vector<double> inner(d + 2, 0.0);
            for (int i = 1; i <= d; ++i) {  // N'
                inner[i - 1] += i * N[i];
                inner[i + 1] -= i * N[i];
            }
            for (int i = 0; i <= d; ++i) inner[i + 1] += 4.0 * r * N[i];
            for (int i = 0; i <= d + 1; ++i) {
                q[i] += inner[i];
                q[i + 2] -= inner[i];
            }
            for (int i = 0; i <= d; ++i) q[i + 1] -= 2.0 * N[i];
            while (q.size() > 1 && q.back() == 0.0) q.pop_back();
            p.push_back(std::move(q));
        }
        return p;
    }();
    if (r >= int(polys.size())) throw validation_error("bump derivative order too large");
    return polys[r];
}

inline double polyval(const std::vector<double>& c, double t) {
    double v = 0.0;
    for (size_t i = c.size(); i-- > 0;) v = v * t + c[i];
    return v;
}
}  // namespace detail

inline double bump_raw(double tau) {
    const double w = 1.0 - tau * tau;
    return w > 0.0 ? std::exp(-1.0 / w) : 0.0;
}

// d^r/dtau^r exp(-1/(1-tau^2))
inline double bump_raw_deriv(double tau, int r) {
    const double w = 1.0 - tau * tau;
    if (w <= 0.0) return 0.0;
    if (r == 0) return std::exp(-1.0 / w);
    return detail::polyval(detail::bump_poly(r), tau) / std::pow(w, 2 * r) * std::exp(-1.0 / w);
}

// Normalized bump psi and its s-derivatives on [a,b].
class Bump {
  public:
    explicit Bump(BumpSpec spec) : spec_(spec) {
        scale_ = 2.0 / (spec.b - spec.a);
        norm_ = 1.0 / integrate([&](double s) { return raw(s); }, spec.a, spec.b, 1e-14);
    }

    const BumpSpec& spec() const { return spec_; }
    double norm() const { return norm_; }

    double operator()(double s) const { return norm_ * raw(s); }

    // d^r psi / ds^r; chain rule brings a (2/(b-a))^r factor.
    double deriv(double s, int r) const {
        if (r == 0) return (*this)(s);
        return norm_ * std::pow(scale_, r) * bump_raw_deriv(tau(s), r);
    }

  private:
    double tau(double s) const { return (2.0 * s - (spec_.a + spec_.b)) / (spec_.b - spec_.a); }
    double raw(double s) const { return bump_raw(tau(s)); }

    BumpSpec spec_;
    double scale_, norm_;
};

}  // namespace nsd
