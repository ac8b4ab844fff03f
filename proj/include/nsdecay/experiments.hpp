#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "nsdecay/oseen.hpp"
#include "nsdecay/snapshot.hpp"
#include "nsdecay/solver.hpp"

namespace nsd {

using ojson = nlohmann::ordered_json;

// Single experiment description; round-trips losslessly through JSON. The only
// environment override honored is NSDECAY_OUT (output directory).
struct ExperimentConfig {
    std::string kind = "simulate";  // profiles|kernels|lemma1|lemma2|simulate|report
    std::string out_dir = "out";
    unsigned seed = 12345;
    bool plots = false;
    int threads = 0;  // 0 = leave the runtime default

    // profiles
    int prof_m = 6;
    double box_lo = -1.0, box_hi = 1.0;
    int prof_sample_n = 192;

    // kernels
    int kern_N = 1024;
    double kern_extent = 96.0;
    std::vector<double> kern_times{0.25, 1.0, 4.0};
    double kern_fit_rlo = 5.0, kern_fit_rhi = 20.0;

    // lemma1
    std::vector<int> l1_orders{0, 1, 2};
    double l1_width = 1.5;
    double l1_tmin = 0.5, l1_tmax = 100.0;
    int l1_nt = 25;
    double l1_fit_tlo = 10.0, l1_fit_thi = 100.0;
    double l1_rlo = 3.0, l1_rhi = 8.0;

    // lemma2
    int l2_N = 256;
    double l2_L = 18.0;
    std::vector<int> l2_orders{0, 1, 2};
    std::vector<double> l2_win_lo{3.2, 3.2, 3.2};  // parallel to l2_orders
    std::vector<double> l2_win_hi{4.5, 4.5, 4.5};
    double l2_time = 1.0;
    double l2_tol = 1e-6;

    // simulate
    SolverConfig solver;
    bool compare_baseline = true;
    double sim_fit_rlo = 0.0, sim_fit_rhi = 0.0;  // 0 -> L/8 .. L/4
    double sim_fit_tlo = 0.0, sim_fit_thi = 0.0;  // 0 -> T/16 .. T

    // report
    std::string report_dir;

    void validate() const;
    ojson to_json() const;
    static ExperimentConfig from_json(const ojson& j);
    static ExperimentConfig load(const std::filesystem::path& file);
    void save(const std::filesystem::path& file) const;
};

// One fitted exponent with everything a reader needs to judge it.
struct ExponentRecord {
    std::string name;
    DecayFit fit;
    double target = 0.0;
    double tol = 0.0;
    double residual = 0.0;  // rms log-residual of the fit
    bool one_sided = false;  // pass if slope <= target + tol (decay at least as fast)
    bool pass = false;
    ojson to_json() const;
};

ExponentRecord make_record(const std::string& name, const DecayFit& fit, double target,
                           double tol, bool one_sided = false);

struct CsvTable {
    std::string file;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    // optional leading label column (used by the aggregated report)
    std::string labels_header{};
    std::vector<std::string> labels{};
};

struct PlotFile {
    std::string file;
    std::string svg;
};

struct ReportBundle {
    std::string name;
    ojson results;
    std::vector<CsvTable> tables;
    std::vector<PlotFile> plots;
    bool all_pass = true;

    void add(const ExponentRecord& rec);
};

ReportBundle run_profiles_export(const ExperimentConfig& cfg);
ReportBundle run_kernels_check(const ExperimentConfig& cfg);
ReportBundle run_lemma1_check(const ExperimentConfig& cfg);
ReportBundle run_lemma2_check(const ExperimentConfig& cfg);
ReportBundle run_simulation(const ExperimentConfig& cfg);
ReportBundle run_report(const ExperimentConfig& cfg);

// Writes <name>_results.json plus the bundle's CSV tables (and SVG plots when
// with_plots). File names are deterministic; no timestamps anywhere.
void emit_reports(const ReportBundle& b, const std::filesystem::path& out_dir,
                  bool with_plots);

std::string svg_loglog_plot(const std::string& title, const DecayFit& fit, double target);

}  // namespace nsd
