// nsdecay: pointwise-decay control laboratory for the 2D Navier-Stokes system.
//
// Subcommands build the vanishing-moment profile family, check the Oseen-kernel
// bounds, run the lemma-level desk checks, and drive full controlled simulations
// with decay reports.

#include <cstdio>
#include <exception>
#include <string>

#include <omp.h>

#include "CLI11.hpp"
#include "nsdecay/experiments.hpp"

using nsd::ExperimentConfig;
using nsd::ReportBundle;

namespace {

struct CommonOpts {
    std::string config;
    std::string out;
    int threads = -1;
    bool plots = false;
};

void add_common(CLI::App* sub, CommonOpts& o) {
    sub->add_option("-c,--config", o.config, "experiment config file (JSON)")
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--out", o.out, "output directory (overrides config)");
    sub->add_option("-t,--threads", o.threads, "OpenMP thread count");
    sub->add_flag("-p,--plots", o.plots, "emit SVG plot files");
}

ExperimentConfig make_config(const CommonOpts& o, const std::string& kind) {
    ExperimentConfig cfg;
    if (!o.config.empty()) cfg = ExperimentConfig::load(o.config);
    cfg.kind = kind;
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (o.threads >= 0) cfg.threads = o.threads;
    if (o.plots) cfg.plots = true;
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    cfg.validate();
    return cfg;
}

int finish(const ExperimentConfig& cfg, const ReportBundle& b) {
    nsd::emit_reports(b, cfg.out_dir, cfg.plots);
    std::printf("%s: wrote %s/%s_results.json (%zu tables, %zu plots)%s\n",
                b.name.c_str(), cfg.out_dir.c_str(), b.name.c_str(), b.tables.size(),
                cfg.plots ? b.plots.size() : size_t(0),
                b.all_pass ? "" : " [some checks out of tolerance]");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nsdecay: moment-cancelling control laboratory for pointwise "
                 "Navier-Stokes decay"};
    app.require_subcommand(1);

    CommonOpts o_prof, o_kern, o_l1, o_l2, o_sim, o_rep;
    auto* c_prof = app.add_subcommand(
        "profiles", "build and certify the biorthogonal profile family");
    add_common(c_prof, o_prof);
    int prof_m = -1;
    c_prof->add_option("-m,--order", prof_m, "family order (vanishing moments)");

    auto* c_kern = app.add_subcommand(
        "kernels", "synthesize the Oseen profile and check the kernel bounds");
    add_common(c_kern, o_kern);

    auto* c_l1 = app.add_subcommand("lemma1", "heat-flow decay desk check");
    add_common(c_l1, o_l1);

    auto* c_l2 = app.add_subcommand("lemma2", "bilinear-term decay desk check");
    add_common(c_l2, o_l2);

    auto* c_sim = app.add_subcommand(
        "simulate", "run the controlled mild-solution solver with decay reports");
    add_common(c_sim, o_sim);
    double sim_T = -1, sim_amp = -1;
    int sim_N = -1, sim_m = -1;
    bool no_baseline = false;
    c_sim->add_option("-N,--grid", sim_N, "grid size per axis");
    c_sim->add_option("-T,--horizon", sim_T, "time horizon");
    c_sim->add_option("-m,--order", sim_m, "control order");
    c_sim->add_option("-a,--amplitude", sim_amp, "datum amplitude");
    c_sim->add_flag("--no-baseline", no_baseline, "skip the m=0 comparison run");

    auto* c_rep = app.add_subcommand(
        "report", "aggregate decay reports from a previous run directory");
    add_common(c_rep, o_rep);
    std::string rep_dir;
    c_rep->add_option("-i,--input", rep_dir, "directory with *_results.json files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_prof->parsed()) {
            ExperimentConfig cfg = make_config(o_prof, "profiles");
            if (prof_m >= 0) cfg.prof_m = prof_m;
            cfg.validate();
            return finish(cfg, nsd::run_profiles_export(cfg));
        }
        if (c_kern->parsed()) {
            ExperimentConfig cfg = make_config(o_kern, "kernels");
            return finish(cfg, nsd::run_kernels_check(cfg));
        }
        if (c_l1->parsed()) {
            ExperimentConfig cfg = make_config(o_l1, "lemma1");
            return finish(cfg, nsd::run_lemma1_check(cfg));
        }
        if (c_l2->parsed()) {
            ExperimentConfig cfg = make_config(o_l2, "lemma2");
            return finish(cfg, nsd::run_lemma2_check(cfg));
        }
        if (c_sim->parsed()) {
            ExperimentConfig cfg = make_config(o_sim, "simulate");
            if (sim_N > 0) cfg.solver.N = sim_N;
            if (sim_T > 0) cfg.solver.T = sim_T;
            if (sim_m >= 0) cfg.solver.m = sim_m;
            if (sim_amp >= 0) cfg.solver.amplitude = sim_amp;
            if (no_baseline) cfg.compare_baseline = false;
            cfg.validate();
            return finish(cfg, nsd::run_simulation(cfg));
        }
        if (c_rep->parsed()) {
            ExperimentConfig cfg = make_config(o_rep, "report");
            if (!rep_dir.empty()) cfg.report_dir = rep_dir;
            cfg.validate();
            return finish(cfg, nsd::run_report(cfg));
        }
    } catch (const nsd::non_contraction_error& e) {
        std::fprintf(stderr, "non-contraction: %s\n", e.what());
        return 3;
    } catch (const nsd::tolerance_error& e) {
        std::fprintf(stderr, "numerical tolerance: %s\n", e.what());
        return 4;
    } catch (const nsd::validation_error& e) {
        std::fprintf(stderr, "validation: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
