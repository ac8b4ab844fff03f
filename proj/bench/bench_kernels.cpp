// Timings of the OpenMP kernels against the serial reference path.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include <omp.h>

#include "nsdecay/fft.hpp"
#include "nsdecay/field.hpp"

using namespace nsd;
using clk = std::chrono::steady_clock;

namespace {

double ms_since(clk::time_point t0) {
    return std::chrono::duration<double, std::milli>(clk::now() - t0).count();
}

template <typename F>
double time_best(F&& f, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = clk::now();
        f();
        best = std::min(best, ms_since(t0));
    }
    return best;
}

void bench_grid(int N) {
    GridSpec g(2, N, 16.0);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> a(g.size()), b(g.size());
    std::vector<cplx> sa(g.size()), sb(g.size());
    for (size_t i = 0; i < g.size(); ++i) {
        a[i] = dist(rng);
        b[i] = dist(rng);
        sa[i] = cplx(dist(rng), dist(rng));
        sb[i] = cplx(dist(rng), dist(rng));
    }
    const int reps = 5;
    std::printf("-- %dx%d grid (threads=%d) --\n", N, N, omp_get_max_threads());
    std::printf("%-18s %10s %10s %8s\n", "kernel", "serial ms", "openmp ms", "speedup");

    struct Row {
        const char* name;
        double ts, tp;
    };
    std::vector<Row> rows;

    {
        auto va = a;
        double ts = time_best([&] { serial::axpy(va, 0.5, b); }, reps);
        double tp = time_best([&] { par::axpy(va, 0.5, b); }, reps);
        rows.push_back({"axpy", ts, tp});
    }
    {
        auto va = a;
        double ts = time_best([&] { serial::lerp(va, a, b, 0.3); }, reps);
        double tp = time_best([&] { par::lerp(va, a, b, 0.3); }, reps);
        rows.push_back({"lerp", ts, tp});
    }
    {
        auto vs = sa;
        double ts = time_best([&] { serial::heat_multiply(g, vs, 1e-3); }, reps);
        double tp = time_best([&] { par::heat_multiply(g, vs, 1e-3); }, reps);
        rows.push_back({"heat_multiply", ts, tp});
    }
    {
        auto vs = sa;
        double ts = time_best([&] { serial::deriv_multiply(g, vs, 0); }, reps);
        double tp = time_best([&] { par::deriv_multiply(g, vs, 0); }, reps);
        rows.push_back({"deriv_multiply", ts, tp});
    }
    {
        std::vector<std::vector<cplx>> f{sa, sb};
        double ts = time_best([&] { serial::leray(g, f); }, reps);
        double tp = time_best([&] { par::leray(g, f); }, reps);
        rows.push_back({"leray", ts, tp});
    }
    {
        auto acc = sa;
        double ts = time_best([&] { serial::heat_axpy(g, acc, sb, 0.1, 0.5); }, reps);
        double tp = time_best([&] { par::heat_axpy(g, acc, sb, 0.1, 0.5); }, reps);
        rows.push_back({"heat_axpy", ts, tp});
    }
    {
        double ts = time_best([&] { (void)serial::max_abs(a); }, reps);
        double tp = time_best([&] { (void)par::max_abs(a); }, reps);
        rows.push_back({"max_abs", ts, tp});
    }
    {
        MIdx beta{{1, 1, 0}, 2};
        double ts = time_best([&] { (void)serial::moment_sum(g, a, beta); }, reps);
        double tp = time_best([&] { (void)par::moment_sum(g, a, beta); }, reps);
        rows.push_back({"moment_sum", ts, tp});
    }
    {
        double ts = time_best([&] { (void)fft_forward_real(g, a); }, reps);
        rows.push_back({"fft (fftw)", ts, ts});
    }
    for (const auto& r : rows)
        std::printf("%-18s %10.3f %10.3f %8.2f\n", r.name, r.ts, r.tp,
                    r.tp > 0 ? r.ts / r.tp : 0.0);
    std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
    int threads = argc > 1 ? std::atoi(argv[1]) : 0;
    if (threads > 0) omp_set_num_threads(threads);
    bench_grid(256);
    bench_grid(512);
    return 0;
}
