#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsd {

// Error taxonomy; the CLI maps these to exit codes 2/3/4.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& w) : std::runtime_error(w) {}
};
struct non_contraction_error : std::runtime_error {
    explicit non_contraction_error(const std::string& w) : std::runtime_error(w) {}
};
struct tolerance_error : std::runtime_error {
    explicit tolerance_error(const std::string& w) : std::runtime_error(w) {}
};

inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * double(n - i) / double(i + 1);
    return r;
}

inline double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// Multi-index over up to 3 axes.
struct MIdx {
    std::array<int, 3> a{0, 0, 0};
    int n = 2;

    int order() const { return a[0] + a[1] + (n > 2 ? a[2] : 0); }
    double fact() const {
        double r = 1.0;
        for (int i = 0; i < n; ++i) r *= factorial(a[i]);
        return r;
    }
    int operator[](int i) const { return a[i]; }
    bool operator==(const MIdx& o) const { return n == o.n && a == o.a; }
    bool leq(const MIdx& b) const {  // componentwise α ≤ β
        for (int i = 0; i < n; ++i)
            if (a[i] > b.a[i]) return false;
        return true;
    }
    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < n; ++i) s += std::to_string(a[i]) + (i + 1 < n ? "," : ")");
        return s;
    }
};

// All multi-indices with |α| ≤ deg_max, ordered by total degree then lexicographically.
inline std::vector<MIdx> multi_indices(int n, int deg_max) {
    std::vector<MIdx> out;
    for (int d = 0; d <= deg_max; ++d) {
        if (n == 1) {
            out.push_back({{d, 0, 0}, 1});
        } else if (n == 2) {
            for (int a1 = d; a1 >= 0; --a1) out.push_back({{a1, d - a1, 0}, 2});
        } else {
            for (int a1 = d; a1 >= 0; --a1)
                for (int a2 = d - a1; a2 >= 0; --a2) out.push_back({{a1, a2, d - a1 - a2}, 3});
        }
    }
    return out;
}

inline double binom_multi(const MIdx& b, const MIdx& a) {
    double r = 1.0;
    for (int i = 0; i < b.n; ++i) r *= binom(b.a[i], a.a[i]);
    return r;
}

}  // namespace nsd
