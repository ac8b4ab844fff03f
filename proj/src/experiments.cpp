#include "nsdecay/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "nsdecay/control.hpp"
#include "nsdecay/datum.hpp"
#include "nsdecay/norms.hpp"
#include "nsdecay/profiles.hpp"

namespace fs = std::filesystem;

namespace nsd {

namespace {

std::vector<double> geomspace(double a, double b, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = a * std::pow(b / a, double(i) / (n - 1));
    return out;
}

double fit_rms(const DecayFit& f) {
    if (!f.ok || f.xs.empty()) return 0.0;
    double ss = 0.0;
    for (size_t i = 0; i < f.xs.size(); ++i) {
        double e = std::log(f.ys[i]) - (f.intercept + f.slope * std::log(f.xs[i]));
        ss += e * e;
    }
    return std::sqrt(ss / f.xs.size());
}

ojson solver_to_json(const SolverConfig& s) {
    ojson j;
    j["n"] = s.n;
    j["m"] = s.m;
    j["N"] = s.N;
    j["L"] = s.L;
    j["T"] = s.T;
    j["out_times"] = s.out_times;
    j["masters_uniform"] = s.masters_uniform;
    j["t_geo_start"] = s.t_geo_start;
    j["panel_ratio"] = s.panel_ratio;
    j["tau_intervals"] = s.tau_intervals;
    j["picard_max"] = s.picard_max;
    j["picard_tol"] = s.picard_tol;
    j["amplitude"] = s.amplitude;
    j["datum_width"] = s.datum_width;
    j["datum_order"] = s.datum_order;
    j["cfl"] = s.cfl;
    j["dt_max"] = s.dt_max;
    j["dt_min"] = s.dt_min;
    j["dealias"] = s.dealias;
    j["zero_nonlinearity"] = s.zero_nonlinearity;
    j["seed"] = s.seed;
    return j;
}

SolverConfig solver_from_json(const ojson& j) {
    SolverConfig s;
    s.n = j.value("n", s.n);
    s.m = j.value("m", s.m);
    s.N = j.value("N", s.N);
    s.L = j.value("L", s.L);
    s.T = j.value("T", s.T);
    s.out_times = j.value("out_times", s.out_times);
    s.masters_uniform = j.value("masters_uniform", s.masters_uniform);
    s.t_geo_start = j.value("t_geo_start", s.t_geo_start);
    s.panel_ratio = j.value("panel_ratio", s.panel_ratio);
    s.tau_intervals = j.value("tau_intervals", s.tau_intervals);
    s.picard_max = j.value("picard_max", s.picard_max);
    s.picard_tol = j.value("picard_tol", s.picard_tol);
    s.amplitude = j.value("amplitude", s.amplitude);
    s.datum_width = j.value("datum_width", s.datum_width);
    s.datum_order = j.value("datum_order", s.datum_order);
    s.cfl = j.value("cfl", s.cfl);
    s.dt_max = j.value("dt_max", s.dt_max);
    s.dt_min = j.value("dt_min", s.dt_min);
    s.dealias = j.value("dealias", s.dealias);
    s.zero_nonlinearity = j.value("zero_nonlinearity", s.zero_nonlinearity);
    s.seed = j.value("seed", s.seed);
    return s;
}

const char* kKinds[] = {"profiles", "kernels", "lemma1", "lemma2", "simulate", "report"};

}  // namespace

void ExperimentConfig::validate() const {
    bool known = false;
    for (const char* k : kKinds) known = known || kind == k;
    if (!known) throw validation_error("config: unknown experiment kind '" + kind + "'");
    if (out_dir.empty()) throw validation_error("config: out_dir must not be empty");
    if (prof_m < 0 || prof_m > 8) throw validation_error("config: profiles.m must be in [0,8]");
    if (!(box_lo < box_hi)) throw validation_error("config: profile box must have lo < hi");
    if (prof_sample_n < 16 || prof_sample_n % 2 != 0)
        throw validation_error("config: profiles.sample_n must be even and >= 16");
    if (kern_N < 64 || kern_N % 2 != 0)
        throw validation_error("config: kernels.N must be even and >= 64");
    if (kern_extent < 8.0) throw validation_error("config: kernels.extent must be >= 8");
    if (kern_times.empty()) throw validation_error("config: kernels.times must not be empty");
    for (double t : kern_times)
        if (!(t > 0)) throw validation_error("config: kernels.times must be positive");
    if (!(kern_fit_rlo > 0 && kern_fit_rlo < kern_fit_rhi))
        throw validation_error("config: kernels fit window invalid");
    if (l1_orders.empty()) throw validation_error("config: lemma1.orders must not be empty");
    for (int m : l1_orders)
        if (m < 0 || m > 8) throw validation_error("config: lemma1 order out of range");
    if (!(l1_width > 0)) throw validation_error("config: lemma1.width must be positive");
    if (!(0 < l1_tmin && l1_tmin < l1_tmax))
        throw validation_error("config: lemma1 time range invalid");
    if (l1_nt < 8) throw validation_error("config: lemma1.nt must be >= 8");
    if (!(0 < l1_rlo && l1_rlo < l1_rhi))
        throw validation_error("config: lemma1 spatial window invalid");
    if (l2_N < 64 || l2_N % 2 != 0)
        throw validation_error("config: lemma2.N must be even and >= 64");
    if (!(l2_L > 0)) throw validation_error("config: lemma2.L must be positive");
    if (l2_win_lo.size() != l2_orders.size() || l2_win_hi.size() != l2_orders.size())
        throw validation_error("config: lemma2 windows must match orders");
    for (size_t i = 0; i < l2_orders.size(); ++i) {
        if (l2_orders[i] < 0 || l2_orders[i] > 3)
            throw validation_error("config: lemma2 order out of range [0,3]");
        if (!(0 < l2_win_lo[i] && l2_win_lo[i] < l2_win_hi[i] &&
              l2_win_hi[i] <= l2_L / 4.0 + 1e-12))
            throw validation_error("config: lemma2 window must lie in (0, L/4]");
    }
    if (!(l2_time > 0) || !(l2_tol > 0))
        throw validation_error("config: lemma2 time/tol must be positive");
    if (kind == "simulate") solver.validate();
    if (kind == "report" && report_dir.empty() && out_dir.empty())
        throw validation_error("config: report needs a directory");
}

ojson ExperimentConfig::to_json() const {
    ojson j;
    j["kind"] = kind;
    j["out_dir"] = out_dir;
    j["seed"] = seed;
    j["plots"] = plots;
    j["threads"] = threads;
    j["profiles"] = ojson{{"m", prof_m},
                          {"box", ojson::array({box_lo, box_hi})},
                          {"sample_n", prof_sample_n}};
    j["kernels"] = ojson{{"N", kern_N},
                         {"extent", kern_extent},
                         {"times", kern_times},
                         {"fit_window", ojson::array({kern_fit_rlo, kern_fit_rhi})}};
    j["lemma1"] = ojson{{"orders", l1_orders},
                        {"width", l1_width},
                        {"t_range", ojson::array({l1_tmin, l1_tmax})},
                        {"nt", l1_nt},
                        {"fit_t", ojson::array({l1_fit_tlo, l1_fit_thi})},
                        {"fit_r", ojson::array({l1_rlo, l1_rhi})}};
    j["lemma2"] = ojson{{"N", l2_N},
                        {"L", l2_L},
                        {"orders", l2_orders},
                        {"win_lo", l2_win_lo},
                        {"win_hi", l2_win_hi},
                        {"time", l2_time},
                        {"tol", l2_tol}};
    j["solver"] = solver_to_json(solver);
    j["simulate"] = ojson{{"compare_baseline", compare_baseline},
                          {"fit_r", ojson::array({sim_fit_rlo, sim_fit_rhi})},
                          {"fit_t", ojson::array({sim_fit_tlo, sim_fit_thi})}};
    j["report"] = ojson{{"dir", report_dir}};
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const ojson& j) {
    ExperimentConfig c;
    c.kind = j.value("kind", c.kind);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.seed = j.value("seed", c.seed);
    c.plots = j.value("plots", c.plots);
    c.threads = j.value("threads", c.threads);
    if (j.contains("profiles")) {
        const auto& p = j.at("profiles");
        c.prof_m = p.value("m", c.prof_m);
        if (p.contains("box")) {
            c.box_lo = p.at("box").at(0).get<double>();
            c.box_hi = p.at("box").at(1).get<double>();
        }
        c.prof_sample_n = p.value("sample_n", c.prof_sample_n);
    }
    if (j.contains("kernels")) {
        const auto& p = j.at("kernels");
        c.kern_N = p.value("N", c.kern_N);
        c.kern_extent = p.value("extent", c.kern_extent);
        c.kern_times = p.value("times", c.kern_times);
        if (p.contains("fit_window")) {
            c.kern_fit_rlo = p.at("fit_window").at(0).get<double>();
            c.kern_fit_rhi = p.at("fit_window").at(1).get<double>();
        }
    }
    if (j.contains("lemma1")) {
        const auto& p = j.at("lemma1");
        c.l1_orders = p.value("orders", c.l1_orders);
        c.l1_width = p.value("width", c.l1_width);
        if (p.contains("t_range")) {
            c.l1_tmin = p.at("t_range").at(0).get<double>();
            c.l1_tmax = p.at("t_range").at(1).get<double>();
        }
        c.l1_nt = p.value("nt", c.l1_nt);
        if (p.contains("fit_t")) {
            c.l1_fit_tlo = p.at("fit_t").at(0).get<double>();
            c.l1_fit_thi = p.at("fit_t").at(1).get<double>();
        }
        if (p.contains("fit_r")) {
            c.l1_rlo = p.at("fit_r").at(0).get<double>();
            c.l1_rhi = p.at("fit_r").at(1).get<double>();
        }
    }
    if (j.contains("lemma2")) {
        const auto& p = j.at("lemma2");
        c.l2_N = p.value("N", c.l2_N);
        c.l2_L = p.value("L", c.l2_L);
        c.l2_orders = p.value("orders", c.l2_orders);
        c.l2_win_lo = p.value("win_lo", c.l2_win_lo);
        c.l2_win_hi = p.value("win_hi", c.l2_win_hi);
        c.l2_time = p.value("time", c.l2_time);
        c.l2_tol = p.value("tol", c.l2_tol);
    }
    if (j.contains("solver")) c.solver = solver_from_json(j.at("solver"));
    if (j.contains("simulate")) {
        const auto& p = j.at("simulate");
        c.compare_baseline = p.value("compare_baseline", c.compare_baseline);
        if (p.contains("fit_r")) {
            c.sim_fit_rlo = p.at("fit_r").at(0).get<double>();
            c.sim_fit_rhi = p.at("fit_r").at(1).get<double>();
        }
        if (p.contains("fit_t")) {
            c.sim_fit_tlo = p.at("fit_t").at(0).get<double>();
            c.sim_fit_thi = p.at("fit_t").at(1).get<double>();
        }
    }
    if (j.contains("report")) c.report_dir = j.at("report").value("dir", c.report_dir);
    return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& file) {
    std::ifstream is(file);
    if (!is) throw validation_error("config: cannot open " + file.string());
    ojson j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw validation_error(std::string("config: parse error: ") + e.what());
    }
    ExperimentConfig c = from_json(j);
    if (const char* env = std::getenv("NSDECAY_OUT"))
        if (*env) c.out_dir = env;
    c.validate();
    return c;
}

void ExperimentConfig::save(const fs::path& file) const {
    ensure_dir(file.parent_path());
    std::ofstream os(file, std::ios::trunc);
    if (!os) throw validation_error("config: cannot write " + file.string());
    os << to_json().dump(2) << "\n";
}

ojson ExponentRecord::to_json() const {
    ojson j;
    j["name"] = name;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["window"] = ojson::array({fit.win_lo, fit.win_hi});
    j["r2"] = fit.r2;
    j["residual"] = residual;
    j["target"] = target;
    j["tol"] = tol;
    j["one_sided"] = one_sided;
    j["pass"] = pass;
    j["ok"] = fit.ok;
    if (!fit.note.empty()) j["note"] = fit.note;
    j["x"] = fit.xs;
    j["y"] = fit.ys;
    return j;
}

ExponentRecord make_record(const std::string& name, const DecayFit& fit, double target,
                           double tol, bool one_sided) {
    ExponentRecord r;
    r.name = name;
    r.fit = fit;
    r.target = target;
    r.tol = tol;
    r.one_sided = one_sided;
    r.residual = fit_rms(fit);
    r.pass = fit.ok && (one_sided ? fit.slope <= target + tol
                                  : std::abs(fit.slope - target) <= tol);
    return r;
}

void ReportBundle::add(const ExponentRecord& rec) {
    if (!results.contains("exponents")) results["exponents"] = ojson::array();
    results["exponents"].push_back(rec.to_json());
    all_pass = all_pass && rec.pass;
}

// ---------------------------------------------------------------- profiles --

ReportBundle run_profiles_export(const ExperimentConfig& cfg) {
    ReportBundle b;
    b.name = "profiles";
    ensure_dir(cfg.out_dir);
    std::vector<BumpSpec> boxes(2, BumpSpec(cfg.box_lo, cfg.box_hi));
    ControlProfileFamily fam = build_chi_family(boxes, cfg.prof_m);
    auto cert = fam.certify();

    ojson& r = b.results;
    r["n"] = fam.n;
    r["m"] = fam.m;
    r["box"] = ojson::array(
        {ojson::array({cfg.box_lo, cfg.box_hi}), ojson::array({cfg.box_lo, cfg.box_hi})});
    ojson polys = ojson::array(), mres = ojson::array();
    for (const auto& p : fam.phi) {
        polys.push_back(p.poly);
        mres.push_back(p.moment_residuals);
    }
    r["polynomial_coefficients"] = polys;
    r["moment_residuals"] = mres;
    r["hankel_condition"] = fam.phi[0].hankel_cond;
    const bool biorth_ok = cert.max_err <= 1e-8;
    r["biorthogonality"] = ojson{{"order", cert.order},
                                 {"max_err", cert.max_err},
                                 {"tol", 1e-8},
                                 {"pass", biorth_ok}};
    b.all_pass = b.all_pass && biorth_ok;

    // Hankel least-eigenvalue curve for the same bump
    MomentVector mv = compute_moments(boxes[0], 2 * std::max(cfg.prof_m, 1));
    ojson eigs = ojson::array();
    CsvTable eig_tab{"profiles_hankel.csv", {"m", "min_eig", "condition"}, {}};
    bool spd_ok = true;
    for (int mm = 0; mm <= cfg.prof_m; ++mm) {
        MomentMatrix M = hankel(mv, mm);
        double ev = smallest_eigenvalue(M);
        double cd = condition_number(M);
        spd_ok = spd_ok && ev > 0;
        eigs.push_back(ojson{{"m", mm}, {"min_eig", ev}, {"condition", cd}});
        eig_tab.rows.push_back({double(mm), ev, cd});
    }
    r["hankel"] = ojson{{"per_order", eigs}, {"pass", spd_ok}};
    b.all_pass = b.all_pass && spd_ok;
    b.tables.push_back(std::move(eig_tab));

    // full biorthogonality table
    CsvTable cert_tab{"profiles_biorthogonality.csv", {"a1", "a2", "b1", "b2", "value"}, {}};
    const size_t K = cert.idx.size();
    for (size_t i = 0; i < K; ++i)
        for (size_t jj = 0; jj < K; ++jj)
            cert_tab.rows.push_back({double(cert.idx[i][0]), double(cert.idx[i][1]),
                                     double(cert.idx[jj][0]), double(cert.idx[jj][1]),
                                     cert.B[i * K + jj]});
    b.tables.push_back(std::move(cert_tab));

    // per-profile binary grid samples
    const double half = 1.25 * std::max(std::abs(cfg.box_lo), std::abs(cfg.box_hi));
    GridSpec g(2, cfg.prof_sample_n, half);
    ojson files = ojson::array();
    for (const auto& al : fam.alphas) {
        GridField f(g, 1);
        f.phys.assign(1, std::vector<double>(g.size()));
        for (size_t i = 0; i < g.size(); ++i) {
            int id[3];
            g.decode(i, id);
            double x[2] = {g.coord(0, id[0]), g.coord(1, id[1])};
            f.phys[0][i] = fam.chi_alpha(al, x);
        }
        f.has_phys = true;
        std::string name =
            "profile_chi_" + std::to_string(al[0]) + "_" + std::to_string(al[1]) + ".bin";
        write_snapshot(fs::path(cfg.out_dir) / name, f, 0.0);
        files.push_back(name);
    }
    r["profile_files"] = files;
    r["sample_grid"] = ojson{{"N", cfg.prof_sample_n}, {"half_extent", half}};
    return b;
}

// ----------------------------------------------------------------- kernels --

ReportBundle run_kernels_check(const ExperimentConfig& cfg) {
    ReportBundle b;
    b.name = "kernels";
    ensure_dir(cfg.out_dir);
    OseenProfile p = build_oseen_profile(2, cfg.kern_N, cfg.kern_extent);
    KernelEstimateReport rep = kernel_bounds_report(p, cfg.kern_times);

    GridField fr(p.g, 1);
    fr.phys.assign(1, std::vector<double>(p.g.size()));
    for (size_t i = 0; i < p.g.size(); ++i) fr.phys[0][i] = p.frob(i);
    fr.has_phys = true;
    DecayFit fit = tail_exponent_fit(fr, cfg.kern_fit_rlo, cfg.kern_fit_rhi, 12);
    ExponentRecord rec = make_record("kernel_phi_tail", fit, -3.0, 0.15);
    b.add(rec);
    if (cfg.plots)
        b.plots.push_back({"kernels_phi_tail.svg",
                           svg_loglog_plot("Oseen profile tail |Phi|(r)", fit, -3.0)});

    ojson& r = b.results;
    r["N"] = cfg.kern_N;
    r["extent"] = cfg.kern_extent;
    r["phi_l1"] = p.phi_l1;
    r["phi_sup"] = p.phi_sup;
    r["tail_const"] = p.tail_const;
    const bool l1_ok = rep.l1_spread <= 0.005;
    r["l1_law"] = ojson{{"times", rep.times},     {"l1", rep.l1},
                        {"l1_scaled", rep.l1_scaled}, {"quad_n", rep.quad_n},
                        {"spread", rep.l1_spread},    {"tol", 0.005},
                        {"pass", l1_ok}};
    b.all_pass = b.all_pass && l1_ok;
    r["constants"] = ojson{{"c_spatial", rep.c_spatial},
                           {"c_temporal", rep.c_temporal},
                           {"heat_usugt", rep.usugt_const},
                           {"heat_usugt0", rep.usugt0_const}};

    CsvTable tab{
        "kernels_l1.csv", {"t", "l1", "l1_scaled", "c_spatial", "c_temporal", "quad_n"}, {}};
    for (size_t i = 0; i < rep.times.size(); ++i)
        tab.rows.push_back({rep.times[i], rep.l1[i], rep.l1_scaled[i], rep.c_spatial[i],
                            rep.c_temporal[i], double(rep.quad_n[i])});
    b.tables.push_back(std::move(tab));

    // profile cache: binary snapshot + manifest carrying the symbol version
    GridField cache(p.g, int(p.comp.size()));
    cache.phys = p.comp;
    cache.has_phys = true;
    write_snapshot(fs::path(cfg.out_dir) / "oseen_profile.bin", cache, 1.0);
    ojson manifest;
    manifest["symbol_version"] = 1;
    manifest["symbol"] = "exp(-|xi|^2) (i xi_l) (delta_jk - xi_j xi_k / |xi|^2)";
    manifest["scaling"] = "F(x,t) = t^{-(n+1)/2} Phi(x/sqrt(t))";
    manifest["n"] = p.n;
    manifest["N"] = cfg.kern_N;
    manifest["extent"] = cfg.kern_extent;
    manifest["components"] = "row-major (j*n+k)*n+l";
    manifest["file"] = "oseen_profile.bin";
    {
        std::ofstream os(fs::path(cfg.out_dir) / "oseen_profile_manifest.json",
                         std::ios::trunc);
        if (!os) throw validation_error("kernels: cannot write profile manifest");
        os << manifest.dump(2) << "\n";
    }
    r["cache"] = manifest;
    return b;
}

// ------------------------------------------------------------------ lemma1 --

namespace {

// sup of |u(.,t)| over a polar raster of radius rmax
double l1_polar_sup(const FreeHeatDatum& f, double t, double rmax, int nr, int nth) {
    double best = 0.0;
#pragma omp parallel for reduction(max : best) schedule(static)
    for (int i = 0; i < nr; ++i) {
        const double rr = rmax * double(i) / (nr - 1);
        for (int jj = 0; jj < nth; ++jj) {
            const double th = 2.0 * M_PI * jj / nth;
            double x[2] = {rr * std::cos(th), rr * std::sin(th)};
            best = std::max(best, f.mag(x, t));
        }
    }
    return best;
}

}  // namespace

ReportBundle run_lemma1_check(const ExperimentConfig& cfg) {
    ReportBundle b;
    b.name = "lemma1";
    ensure_dir(cfg.out_dir);
    const std::vector<double> times = geomspace(cfg.l1_tmin, cfg.l1_tmax, cfg.l1_nt);
    const int nth = 48;

    CsvTable tab_t{"lemma1_temporal.csv", {"m", "t", "sup"}, {}};
    CsvTable tab_s{"lemma1_spatial.csv", {"m", "r", "envelope"}, {}};
    ojson per_m = ojson::array();

    for (int m : cfg.l1_orders) {
        FreeHeatDatum fhd(DatumSpec{m, cfg.l1_width, 1.0, -1});
        std::vector<double> sups(times.size());
        for (size_t i = 0; i < times.size(); ++i) {
            const double rmax = std::max(6.0, 4.0 * std::sqrt(times[i]));
            sups[i] = l1_polar_sup(fhd, times[i], rmax, 160, nth);
            tab_t.rows.push_back({double(m), times[i], sups[i]});
        }
        DecayFit ft = temporal_exponent_fit(times, sups, cfg.l1_fit_tlo, cfg.l1_fit_thi);
        b.add(make_record("lemma1_temporal_m" + std::to_string(m), ft, -(3.0 + m) / 2.0,
                          0.2));
        if (cfg.plots)
            b.plots.push_back({"lemma1_temporal_m" + std::to_string(m) + ".svg",
                               svg_loglog_plot("heat sup-norm decay, m=" + std::to_string(m),
                                               ft, -(3.0 + m) / 2.0)});

        // spatial envelope: shell sup over all sampled times
        const int nsh = 12;
        std::vector<double> rmid(nsh), prof(nsh, 0.0);
        for (int s = 0; s < nsh; ++s) {
            const double e0 = cfg.l1_rlo * std::pow(cfg.l1_rhi / cfg.l1_rlo, double(s) / nsh);
            const double e1 =
                cfg.l1_rlo * std::pow(cfg.l1_rhi / cfg.l1_rlo, double(s + 1) / nsh);
            rmid[s] = std::sqrt(e0 * e1);
        }
        for (double t : times)
            for (int s = 0; s < nsh; ++s)
                for (int jj = 0; jj < nth; ++jj) {
                    const double th = 2.0 * M_PI * jj / nth;
                    double x[2] = {rmid[s] * std::cos(th), rmid[s] * std::sin(th)};
                    prof[s] = std::max(prof[s], fhd.mag(x, t));
                }
        for (int s = 0; s < nsh; ++s) tab_s.rows.push_back({double(m), rmid[s], prof[s]});
        DecayFit fsp = fit_loglog(rmid, prof);
        b.add(make_record("lemma1_spatial_m" + std::to_string(m), fsp, -(3.0 + m), 0.3));
        if (cfg.plots)
            b.plots.push_back({"lemma1_spatial_m" + std::to_string(m) + ".svg",
                               svg_loglog_plot("heat spatial envelope, m=" + std::to_string(m),
                                               fsp, -(3.0 + m))});

        // measured C0 analogue: sup_t (1+t)^{(n+1+m)/2} sup_x |u| / E_m(u0)
        double em = 0.0;
        const double rsup = 1.5 * cfg.l1_width;
        for (int i = 0; i < 240; ++i) {
            const double rr = rsup * double(i) / 239;
            for (int jj = 0; jj < nth; ++jj) {
                const double th = 2.0 * M_PI * jj / nth;
                const double x1 = rr * std::cos(th), x2 = rr * std::sin(th);
                const double u1 = -fhd.bump.deriv(x1, m) * fhd.bump.deriv(x2, 1);
                const double u2 = fhd.bump.deriv(x1, m + 1) * fhd.bump.deriv(x2, 0);
                em = std::max(em, std::pow(1.0 + rr, 3.0 + m) * std::hypot(u1, u2));
            }
        }
        double c0 = 0.0;
        for (size_t i = 0; i < times.size(); ++i)
            c0 = std::max(c0, std::pow(1.0 + times[i], (3.0 + m) / 2.0) * sups[i]);
        c0 = em > 0 ? c0 / em : 0.0;
        per_m.push_back(ojson{{"m", m}, {"E_m", em}, {"C0_analogue", c0}});
    }
    b.results["per_order"] = per_m;
    b.tables.push_back(std::move(tab_t));
    b.tables.push_back(std::move(tab_s));

    // degraded example: datum without vanishing moments decays at the generic rate
    {
        FreeHeatDatum fhd(DatumSpec{0, cfg.l1_width, 1.0, -1});
        std::vector<double> sups(times.size());
        for (size_t i = 0; i < times.size(); ++i) {
            const double rmax = std::max(6.0, 4.0 * std::sqrt(times[i]));
            double best = 0.0;
#pragma omp parallel for reduction(max : best) schedule(static)
            for (int r = 0; r < 160; ++r) {
                const double rr = rmax * double(r) / 159;
                for (int jj = 0; jj < nth; ++jj) {
                    const double th = 2.0 * M_PI * jj / nth;
                    const double v = fhd.conv1d(rr * std::cos(th), times[i], 0) *
                                     fhd.conv1d(rr * std::sin(th), times[i], 0);
                    best = std::max(best, std::abs(v));
                }
            }
            sups[i] = best;
        }
        DecayFit ft = temporal_exponent_fit(times, sups, cfg.l1_fit_tlo, cfg.l1_fit_thi);
        b.add(make_record("lemma1_degraded_temporal", ft, -1.0, 0.2));
    }

    // spectral-path crosscheck inside the periodic-safe window
    {
        const int m = cfg.l1_orders.front();
        const double tck = 2.0;
        // dx must resolve the bump derivatives: the sampling error dominates the
        // comparison and drops ~150x per halving; dx=12/1024 leaves ~100x margin
        GridSpec g(2, 1024, 12.0);
        FreeHeatDatum fhd(DatumSpec{m, cfg.l1_width, 1.0, -1});
        GridField u0(g, 2);
        u0.phys.assign(2, std::vector<double>(g.size()));
        for (size_t i = 0; i < g.size(); ++i) {
            int id[3];
            g.decode(i, id);
            const double x1 = g.coord(0, id[0]), x2 = g.coord(1, id[1]);
            u0.phys[0][i] = -fhd.bump.deriv(x1, m) * fhd.bump.deriv(x2, 1);
            u0.phys[1][i] = fhd.bump.deriv(x1, m + 1) * fhd.bump.deriv(x2, 0);
        }
        u0.has_phys = true;
        GridField ut = heat_evolve(u0, tck);
        double maxdiff = 0.0, sup = 0.0;
#pragma omp parallel for reduction(max : maxdiff, sup) schedule(static)
        for (size_t i = 0; i < g.size(); ++i) {
            int id[3];
            g.decode(i, id);
            if ((id[0] | id[1]) & 3) continue;  // stride-4 subgrid is plenty for a sup
            double x[2] = {g.coord(0, id[0]), g.coord(1, id[1])};
            if (x[0] * x[0] + x[1] * x[1] > 25.0) continue;
            double uf[2];
            fhd.eval(x, tck, uf);
            maxdiff = std::max(maxdiff, std::hypot(ut.phys[0][i] - uf[0],
                                                   ut.phys[1][i] - uf[1]));
            sup = std::max(sup, std::hypot(uf[0], uf[1]));
        }
        const double rel = sup > 0 ? maxdiff / sup : 0.0;
        const bool ok = rel <= 1e-5;
        b.results["spectral_crosscheck"] = ojson{{"m", m},         {"t", tck},
                                                 {"grid_N", 1024}, {"grid_L", 12.0},
                                                 {"window_radius", 5.0},
                                                 {"max_rel_diff", rel},
                                                 {"tol", 1e-5},   {"pass", ok}};
        b.all_pass = b.all_pass && ok;
    }
    return b;
}

// ------------------------------------------------------------------ lemma2 --

namespace {

GridField lemma2_pair(const GridSpec& g, bool second) {
    // Fixed compactly supported analytic test pair. Both fields are scalar
    // multiples of one profile, so every entry of u (x) v is proportional to
    // P(x1) Q(x2) with
    //   P(s) = (0.55 + s - beta s^2 - delta s^3) B(s),  Q(s) = (1 - kap s^2) B(s)
    // and B(s) = b(s/0.95)^2.  The polynomial coefficients are tuned against the
    // moments of B (mu2/mu4 = 4.265624, mu4/mu6 = 3.164180) to pin the product's
    // multipole hierarchy: mu2(P) = 0.05 mu2(B), mu3(P) = 0.15 mu4(B),
    // mu2(Q) = 0.55 mu2(B).  Each B_m shot then has its subleading multipole
    // either an order of magnitude below the leading one or pointed where the
    // leading lobe of that shot vanishes (the x2 quadrupole is invisible along
    // the x1 dipole axis and vice versa), so the -(n+1+m) asymptote is clean
    // from r ~ 3 on while second moments stay large enough for the m=2 signal
    // to clear the sampling floor.
    GridField f(g, 2);
    f.phys.assign(2, std::vector<double>(g.size()));
    const double beta = 0.50 * 4.265624;   // mu2(P) = 0.05 mu2(B)
    const double kap = 0.45 * 4.265624;    // mu2(Q) = 0.55 mu2(B)
    const double delta = 0.85 * 3.164180;  // mu3(P) = 0.15 mu4(B)
    for (size_t i = 0; i < g.size(); ++i) {
        int id[3];
        g.decode(i, id);
        const double x1 = g.coord(0, id[0]), x2 = g.coord(1, id[1]);
        const double phi = bump_raw(x1 / 0.95) * bump_raw(x2 / 0.95);
        if (!second) {
            f.phys[0][i] = phi;
            f.phys[1][i] = 0.7 * phi;
        } else {
            const double psi = (0.55 + x1 - beta * x1 * x1 - delta * x1 * x1 * x1) *
                               (1.0 - kap * x2 * x2) * phi;
            f.phys[0][i] = 0.9 * psi;
            f.phys[1][i] = -0.6 * psi;
        }
    }
    f.has_phys = true;
    return f;
}

}  // namespace

ReportBundle run_lemma2_check(const ExperimentConfig& cfg) {
    ReportBundle b;
    b.name = "lemma2";
    ensure_dir(cfg.out_dir);
    GridSpec g(2, cfg.l2_N, cfg.l2_L);
    GridField u = lemma2_pair(g, false), v = lemma2_pair(g, true);
    std::vector<BumpSpec> boxes(2, BumpSpec(-1.0, 1.0));

    const std::vector<double> two_times{0.0, cfg.l2_time};
    std::vector<GridField> ustore, vstore;
    TimeSampled U = TimeSampled::constant(u, two_times, ustore);
    TimeSampled V = TimeSampled::constant(v, two_times, vstore);

    CsvTable tab{"lemma2_profiles.csv", {"m", "r", "shell_max"}, {}};
    ojson per_m = ojson::array();
    std::vector<double> slopes;
    for (size_t mi = 0; mi < cfg.l2_orders.size(); ++mi) {
        const int m = cfg.l2_orders[mi];
        // order m+1 family: the subtraction profiles (|alpha| <= m-1) then have
        // vanishing moments through order m, so subtracting them does not inflate
        // the residual's order-m moments and the tail settles early
        ControlProfileFamily fam = build_chi_family(boxes, m + 1);
        SampledFamily sf(fam, g, std::max(0, m - 1));
        int nodes = 0;
        GridField B = duhamel_bilinear(U, V, &sf, m, cfg.l2_time, cfg.l2_tol, &nodes);
        DecayFit fit = tail_exponent_fit(B, cfg.l2_win_lo[mi], cfg.l2_win_hi[mi], 10);
        b.add(make_record("lemma2_tail_m" + std::to_string(m), fit, -(3.0 + m), 0.3));
        if (cfg.plots)
            b.plots.push_back({"lemma2_tail_m" + std::to_string(m) + ".svg",
                               svg_loglog_plot("bilinear tail, m=" + std::to_string(m), fit,
                                               -(3.0 + m))});
        slopes.push_back(fit.slope);
        for (size_t i = 0; i < fit.xs.size(); ++i)
            tab.rows.push_back({double(m), fit.xs[i], fit.ys[i]});
        per_m.push_back(ojson{{"m", m},
                              {"tau_nodes", nodes},
                              {"sup", B.sup()},
                              {"X_norm", weighted_norms(B, m).E_m},
                              {"gram_defect", sf.gram_defect}});
    }
    b.results["per_order"] = per_m;
    if (slopes.size() >= 2) {
        ojson diffs = ojson::array();
        for (size_t i = 1; i < slopes.size(); ++i) {
            const double dm = cfg.l2_orders[i] - cfg.l2_orders[i - 1];
            diffs.push_back((slopes[i - 1] - slopes[i]) / dm);
        }
        b.results["improvement_per_unit_m"] = diffs;
    }
    b.tables.push_back(std::move(tab));

    // swap symmetry at u=v (and the symmetric fast path against the generic one)
    {
        const int m = 1;
        ControlProfileFamily fam = build_chi_family(boxes, m + 1);
        SampledFamily sf(fam, g, 0);
        std::vector<GridField> sa, sb, sc;
        TimeSampled A = TimeSampled::constant(u, two_times, sa);
        TimeSampled B2 = TimeSampled::constant(u, two_times, sb);
        // symmetry holds at any node count, so a loose tol keeps this cheap
        const double swap_tol = std::max(cfg.l2_tol, 1e-4);
        GridField w1 = duhamel_bilinear(A, B2, &sf, m, cfg.l2_time, swap_tol);
        GridField w2 = duhamel_bilinear(B2, A, &sf, m, cfg.l2_time, swap_tol);
        TimeSampled C = TimeSampled::constant(u, two_times, sc);
        GridField w3 = duhamel_bilinear(C, C, &sf, m, cfg.l2_time, swap_tol);
        double dsw = 0.0, dsym = 0.0;
        for (int c = 0; c < 2; ++c) {
            dsw = std::max(dsw, k::max_abs_diff(w1.phys[c], w2.phys[c]));
            dsym = std::max(dsym, k::max_abs_diff(w1.phys[c], w3.phys[c]));
        }
        const double scale = std::max(w1.sup(), 1e-300);
        const bool ok = dsw / scale <= 1e-12 && dsym / scale <= 1e-10;
        b.results["swap_symmetry"] = ojson{{"m", m},
                                           {"rel_swap_diff", dsw / scale},
                                           {"rel_sympath_diff", dsym / scale},
                                           {"tol", 1e-10},
                                           {"pass", ok}};
        b.all_pass = b.all_pass && ok;
    }

    // Y_{m,T}-style proxy: one extra cancellation order on X_m data leaves the
    // X_m-weighted outermost shells decreasing
    ojson proxies = ojson::array();
    for (size_t mi = 0; mi < cfg.l2_orders.size(); ++mi) {
        const int m = cfg.l2_orders[mi];
        // B_3 would need the order-4 profiles, whose oscillation scale is below
        // what this grid resolves; the proxy stops at B_2
        if (m + 1 > 2) continue;
        ControlProfileFamily fam = build_chi_family(boxes, m + 2);
        SampledFamily sf(fam, g, m);
        GridField B = duhamel_bilinear(U, V, &sf, m + 1, cfg.l2_time, cfg.l2_tol);
        auto shells = radial_shell_max(B, cfg.l2_win_lo[mi], cfg.l2_win_hi[mi], 10);
        std::vector<double> rs, wy;
        for (auto& s : shells) {
            rs.push_back(s.first);
            wy.push_back(std::pow(1.0 + s.first, 3.0 + m) * s.second);
        }
        DecayFit fit = fit_loglog(rs, wy);
        const bool decreasing = wy.back() < wy.front();
        proxies.push_back(ojson{{"m", m},
                                {"weighted_slope", fit.slope},
                                {"decreasing", decreasing},
                                {"pass", decreasing}});
        b.all_pass = b.all_pass && decreasing;
    }
    b.results["y_proxy"] = proxies;
    return b;
}

// ---------------------------------------------------------------- simulate --

namespace {

struct SimRunOut {
    DecayFit spatial;
    bool degenerate = false;
    bool valid = false;
};

SimRunOut simulate_one(const ExperimentConfig& cfg, const SolverConfig& sc,
                       const std::string& label, double rlo, double rhi, double tlo,
                       double thi, ReportBundle& b) {
    SimRunOut out;
    GridSpec g(2, sc.N, sc.L);
    const int datum_m = sc.datum_order < 0 ? sc.m : sc.datum_order;
    std::vector<BumpSpec> boxes(2, BumpSpec(-1.0, 1.0));
    // order m+1 family: biorthogonality through |beta| <= m-1 (all the control
    // scheme needs) plus vanishing order-m moments, so the forced residual's
    // far field reaches its asymptotic rate inside the measurement window
    ControlProfileFamily fam = build_chi_family(boxes, std::max(sc.m, 0) + 1);

    DatumCertificate cert;
    GridField u0 =
        make_initial_datum(g, DatumSpec{datum_m, sc.datum_width, sc.amplitude, sc.m}, &cert);

    ojson run;
    run["label"] = label;
    run["solver"] = solver_to_json(sc);
    run["datum"] = ojson{{"order", datum_m},
                         {"width", sc.datum_width},
                         {"amplitude", sc.amplitude},
                         {"max_moment", cert.max_moment},
                         {"sharp_moment", cert.sharp_moment},
                         {"max_div", cert.max_div}};

    if (u0.sup() == 0.0) {
        run["degenerate"] = true;
        b.results["runs"].push_back(run);
        out.degenerate = true;
        return out;
    }

    Trajectory traj = picard_solve(u0, fam, sc);
    residual_check(traj, fam, u0);
    const size_t K = traj.times.size();
    const int md = std::min(sc.m, datum_m);

    // temporal
    std::vector<double> sups(K);
    for (size_t k = 0; k < K; ++k) sups[k] = traj.u[k].sup();
    DecayFit ft = temporal_exponent_fit(traj.times, sups, tlo, thi);
    // one-sided: the theorem's bound is an upper envelope, so decaying faster
    // than the generic rate is a pass, not a miss
    b.add(make_record(label + "_temporal", ft, -(3.0 + md) / 2.0, 0.3, true));
    if (cfg.plots)
        b.plots.push_back({label + "_temporal.svg",
                           svg_loglog_plot(label + " sup-norm decay", ft,
                                           -(3.0 + md) / 2.0)});

    // spatial envelope over stored times
    const int nsh = 12;
    std::vector<double> rs(nsh), env(nsh, 0.0);
    for (size_t k = 0; k < K; ++k) {
        auto shells = radial_shell_max(traj.u[k], rlo, rhi, nsh);
        for (int s = 0; s < nsh; ++s) {
            rs[s] = shells[s].first;
            env[s] = std::max(env[s], shells[s].second);
        }
    }
    DecayFit fsp = fit_loglog(rs, env);
    b.add(make_record(label + "_spatial", fsp, -(3.0 + md), 0.3));
    if (cfg.plots)
        b.plots.push_back({label + "_spatial.svg",
                           svg_loglog_plot(label + " spatial envelope", fsp, -(3.0 + md))});
    out.spatial = fsp;
    out.valid = fsp.ok;

    // force
    std::vector<double> fsups(K, 0.0);
    for (size_t k = 0; k < K && k < traj.force.f.size(); ++k)
        fsups[k] = traj.force.f[k].sup();
    if (sc.m >= 1) {
        DecayFit ff = force_decay_report(traj.force, tlo, thi);
        b.add(make_record(label + "_force", ff, -(3.0 + sc.m + 2.0) / 2.0, 0.3));
        if (cfg.plots)
            b.plots.push_back({label + "_force.svg",
                               svg_loglog_plot(label + " force sup-norm", ff,
                                               -(3.0 + sc.m + 2.0) / 2.0)});
    } else {
        double fmax = 0.0;
        for (double s : fsups) fmax = std::max(fmax, s);
        run["force_zero"] = ojson{{"max_sup", fmax}, {"pass", fmax == 0.0}};
        b.all_pass = b.all_pass && fmax == 0.0;
    }

    // residual of the integral equation
    double rmax = 0.0;
    for (double r : traj.residuals) rmax = std::max(rmax, r);
    const bool res_ok = traj.converged && rmax <= 10.0 * sc.picard_tol;
    run["residual"] = ojson{{"max", rmax},
                            {"bound", 10.0 * sc.picard_tol},
                            {"converged", traj.converged},
                            {"pass", res_ok}};
    b.all_pass = b.all_pass && res_ok;

    run["iterations"] = traj.iterations;
    run["increments"] = traj.increments;
    run["ratios"] = traj.ratios;
    run["x_norm"] = traj.x_norm;
    run["div_max"] = traj.div_max;
    run["masters"] = K;
    b.results["runs"].push_back(run);

    // persistence
    const fs::path dir(cfg.out_dir);
    write_snapshot(dir / (label + "_datum.bin"), u0, 0.0);
    write_snapshot(dir / (label + "_final.bin"), traj.u.back(), traj.times.back());
    if (sc.m >= 1 && !traj.force.f.empty())
        write_snapshot(dir / (label + "_force_final.bin"), traj.force.f.back(),
                       traj.times.back());

    CsvTable tt{label + "_temporal.csv", {"t", "sup", "weighted_sup", "residual"}, {}};
    for (size_t k = 0; k < K; ++k)
        tt.rows.push_back({traj.times[k], sups[k],
                           std::pow(1.0 + traj.times[k], (3.0 + md) / 2.0) * sups[k],
                           k < traj.residuals.size() ? traj.residuals[k] : 0.0});
    b.tables.push_back(std::move(tt));

    CsvTable ts{label + "_spatial.csv", {"r", "envelope"}, {}};
    for (int s = 0; s < nsh; ++s) ts.rows.push_back({rs[s], env[s]});
    b.tables.push_back(std::move(ts));

    CsvTable tp{label + "_picard.csv", {"iter", "increment", "ratio"}, {}};
    for (size_t i = 0; i < traj.increments.size(); ++i)
        tp.rows.push_back({double(i + 1), traj.increments[i],
                           i >= 1 && i - 1 < traj.ratios.size() ? traj.ratios[i - 1] : 0.0});
    b.tables.push_back(std::move(tp));

    if (sc.m >= 1) {
        CsvTable tf{label + "_force.csv", {"t", "sup_force"}, {}};
        for (size_t k = 0; k < K; ++k) tf.rows.push_back({traj.times[k], fsups[k]});
        b.tables.push_back(std::move(tf));

        CsvTable tsg{label + "_signal.csv", {"t"}, {}};
        for (const auto& al : traj.signal.alphas)
            for (int i = 0; i < 2; ++i)
                for (int jj = 0; jj < 2; ++jj)
                    tsg.header.push_back("A_" + std::to_string(al[0]) +
                                         std::to_string(al[1]) + "_" + std::to_string(i) +
                                         std::to_string(jj));
        for (size_t k = 0; k < K; ++k) {
            std::vector<double> row{traj.times[k]};
            for (size_t q = 0; q < traj.signal.alphas.size(); ++q)
                for (int e = 0; e < 4; ++e) row.push_back(traj.signal.A[k][q][e]);
            tsg.rows.push_back(std::move(row));
        }
        b.tables.push_back(std::move(tsg));
    }
    return out;
}

}  // namespace

ReportBundle run_simulation(const ExperimentConfig& cfg) {
    ReportBundle b;
    b.name = "simulate";
    ensure_dir(cfg.out_dir);
    b.results["config"] = cfg.to_json();
    b.results["runs"] = ojson::array();

    const double L = cfg.solver.L, T = cfg.solver.T;
    const double rlo = cfg.sim_fit_rlo > 0 ? cfg.sim_fit_rlo : L / 8.0;
    const double rhi = cfg.sim_fit_rhi > 0 ? cfg.sim_fit_rhi : L / 4.0;
    const double tlo = cfg.sim_fit_tlo > 0 ? cfg.sim_fit_tlo : T / 16.0;
    const double thi = cfg.sim_fit_thi > 0 ? cfg.sim_fit_thi : T;

    SimRunOut ctrl = simulate_one(cfg, cfg.solver, "controlled", rlo, rhi, tlo, thi, b);

    if (cfg.compare_baseline && cfg.solver.m >= 1 && !ctrl.degenerate) {
        SolverConfig base = cfg.solver;
        base.m = 0;
        base.datum_order = 0;
        SimRunOut bl = simulate_one(cfg, base, "baseline", rlo, rhi, tlo, thi, b);
        if (ctrl.valid && bl.valid) {
            const double improvement = ctrl.spatial.slope - bl.spatial.slope;  // negative
            const bool ok = -improvement >= 0.7;
            b.results["comparison"] = ojson{{"controlled_slope", ctrl.spatial.slope},
                                            {"baseline_slope", bl.spatial.slope},
                                            {"improvement", -improvement},
                                            {"required", 0.7},
                                            {"pass", ok}};
            b.all_pass = b.all_pass && ok;
        }
    }
    if (ctrl.degenerate) b.results["degenerate"] = true;
    return b;
}

// ------------------------------------------------------------------ report --

ReportBundle run_report(const ExperimentConfig& cfg) {
    ReportBundle b;
    b.name = "report";
    const fs::path dir = cfg.report_dir.empty() ? fs::path(cfg.out_dir)
                                                : fs::path(cfg.report_dir);
    if (!fs::exists(dir))
        throw validation_error("report: directory not found: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (name.size() > 13 && name.substr(name.size() - 13) == "_results.json" &&
            name != "report_results.json")
            files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw validation_error("report: no *_results.json files in " + dir.string());

    ojson sources = ojson::array(), all = ojson::array();
    CsvTable tab{"report_summary.csv",
                 {"slope", "win_lo", "win_hi", "residual", "target", "tol", "pass"},
                 {}};
    tab.labels_header = "name";
    bool pass = true;
    for (const auto& f : files) {
        std::ifstream is(f);
        ojson j;
        try {
            is >> j;
        } catch (const std::exception& e) {
            throw validation_error("report: parse error in " + f.string() + ": " + e.what());
        }
        sources.push_back(f.filename().string());
        if (!j.contains("exponents")) continue;
        for (const auto& rec : j.at("exponents")) {
            all.push_back(rec);
            const bool p = rec.value("pass", false);
            pass = pass && p;
            tab.labels.push_back(rec.value("name", std::string("?")));
            tab.rows.push_back({rec.value("slope", 0.0),
                                rec.contains("window") ? rec.at("window").at(0).get<double>()
                                                       : 0.0,
                                rec.contains("window") ? rec.at("window").at(1).get<double>()
                                                       : 0.0,
                                rec.value("residual", 0.0), rec.value("target", 0.0),
                                rec.value("tol", 0.0), p ? 1.0 : 0.0});
            if (cfg.plots && rec.contains("x") && rec.at("x").size() >= 2) {
                DecayFit fit;
                fit.slope = rec.value("slope", 0.0);
                fit.intercept = rec.value("intercept", 0.0);
                fit.xs = rec.at("x").get<std::vector<double>>();
                fit.ys = rec.at("y").get<std::vector<double>>();
                fit.ok = true;
                b.plots.push_back(
                    {"report_" + rec.value("name", std::string("fit")) + ".svg",
                     svg_loglog_plot(rec.value("name", std::string()), fit,
                                     rec.value("target", 0.0))});
            }
        }
    }
    b.results["sources"] = sources;
    b.results["exponents"] = all;
    b.results["all_pass"] = pass;
    b.all_pass = pass;
    b.tables.push_back(std::move(tab));
    return b;
}

// ------------------------------------------------------------------- emit --

void emit_reports(const ReportBundle& b, const fs::path& out_dir, bool with_plots) {
    ensure_dir(out_dir);
    {
        std::ofstream os(out_dir / (b.name + "_results.json"), std::ios::trunc);
        if (!os)
            throw validation_error("emit_reports: cannot write results JSON in " +
                                   out_dir.string());
        os << b.results.dump(2) << "\n";
    }
    for (const auto& t : b.tables) {
        if (t.labels.empty())
            write_csv(out_dir / t.file, t.header, t.rows);
        else
            write_csv_labeled(out_dir / t.file, t.labels_header, t.header, t.labels, t.rows);
    }
    if (with_plots)
        for (const auto& p : b.plots) {
            if (p.svg.empty()) continue;
            std::ofstream os(out_dir / p.file, std::ios::trunc);
            if (!os) throw validation_error("emit_reports: cannot write " + p.file);
            os << p.svg;
        }
}

std::string svg_loglog_plot(const std::string& title, const DecayFit& fit, double target) {
    if (!fit.ok || fit.xs.size() < 2) return {};
    const double X0 = 60, X1 = 450, Y0 = 310, Y1 = 40;
    double lx0 = std::log10(fit.xs.front()), lx1 = std::log10(fit.xs.back());
    double ly0 = 1e300, ly1 = -1e300;
    for (double y : fit.ys) {
        ly0 = std::min(ly0, std::log10(y));
        ly1 = std::max(ly1, std::log10(y));
    }
    if (ly1 - ly0 < 1e-12) {
        ly0 -= 0.5;
        ly1 += 0.5;
    }
    const double padx = 0.04 * (lx1 - lx0), pady = 0.08 * (ly1 - ly0);
    lx0 -= padx;
    lx1 += padx;
    ly0 -= pady;
    ly1 += pady;
    auto px = [&](double lx) { return X0 + (lx - lx0) / (lx1 - lx0) * (X1 - X0); };
    auto py = [&](double ly) { return Y0 + (ly - ly0) / (ly1 - ly0) * (Y1 - Y0); };
    char buf[512];
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"360\" "
         "viewBox=\"0 0 480 360\">\n";
    s += "<rect width=\"480\" height=\"360\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n"
                  "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n",
                  X0, Y0, X1, Y0, X0, Y0, X0, Y1);
    s += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"240\" y=\"24\" font-size=\"14\" text-anchor=\"middle\" "
                  "font-family=\"sans-serif\">%s</text>\n",
                  title.c_str());
    s += buf;
    // data
    for (size_t i = 0; i < fit.xs.size(); ++i) {
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"#1f77b4\"/>\n",
                      px(std::log10(fit.xs[i])), py(std::log10(fit.ys[i])));
        s += buf;
    }
    // fitted line (natural-log fit mapped to log10 axes)
    auto yfit = [&](double x) {
        return (fit.intercept + fit.slope * std::log(x)) / std::log(10.0);
    };
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                  "stroke=\"#d62728\" stroke-width=\"1.5\"/>\n",
                  px(std::log10(fit.xs.front())), py(yfit(fit.xs.front())),
                  px(std::log10(fit.xs.back())), py(yfit(fit.xs.back())));
    s += buf;
    // target-slope guide through the first fitted point
    const double anchor = std::log(fit.ys.front()) - target * std::log(fit.xs.front());
    auto ytgt = [&](double x) { return (anchor + target * std::log(x)) / std::log(10.0); };
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#2ca02c\" "
                  "stroke-dasharray=\"5,4\"/>\n",
                  px(std::log10(fit.xs.front())), py(ytgt(fit.xs.front())),
                  px(std::log10(fit.xs.back())), py(ytgt(fit.xs.back())));
    s += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"240\" y=\"345\" font-size=\"12\" text-anchor=\"middle\" "
                  "font-family=\"sans-serif\">slope %.4g (target %.4g), window [%.4g, %.4g]"
                  "</text>\n",
                  fit.slope, target, fit.win_lo, fit.win_hi);
    s += buf;
    s += "</svg>\n";
    return s;
}

}  // namespace nsd
