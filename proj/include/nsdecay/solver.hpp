#pragma once

#include <functional>
#include <vector>

#include "nsdecay/control.hpp"
#include "nsdecay/datum.hpp"
#include "nsdecay/field.hpp"

namespace nsd {

struct SolverConfig {
    int n = 2;
    int m = 1;             // control order
    int N = 128;
    double L = 8.0;
    double T = 1.0;
    std::vector<double> out_times;  // strictly increasing, in (0,T]; empty -> auto

    // master-grid refinement for the whole-trajectory Picard iteration
    int masters_uniform = 8;     // uniform panels on [0, min(t_geo_start,T)]
    double t_geo_start = 0.25;   // geometric spacing beyond this time
    double panel_ratio = 1.22;

    int tau_intervals = 8;       // Simpson intervals per panel (even) in tau
    int picard_max = 30;
    double picard_tol = 1e-10;

    double amplitude = 0.05;
    double datum_width = 2.0;
    int datum_order = -1;        // vanishing-moment order of u0; -1 means = m

    // timestep_solve
    double cfl = 0.4;
    double dt_max = 2e-3;
    double dt_min = 1e-8;
    bool dealias = true;
    bool zero_nonlinearity = false;  // test hook: heat flow only

    unsigned seed = 12345;

    void validate() const;
    std::vector<double> build_masters() const;  // includes 0 and T and out_times
};

struct Trajectory {
    SolverConfig cfg;
    std::vector<double> times;     // snapshot times (masters incl. 0)
    std::vector<GridField> u;      // solution snapshots
    MomentSignal signal;
    ForceField force;
    std::vector<double> increments;  // per-iteration discrete X_{m,T} increments
    std::vector<double> ratios;
    std::vector<double> residuals;   // per output time, filled by residual_check
    double div_max = 0.0;            // max discrete divergence / sup|u|
    int iterations = 0;
    double x_norm = 0.0;             // X_{m,T} norm of the final iterate
    bool converged = false;
};

// Time-sampled input to the bilinear operator (piecewise-linear in time).
struct TimeSampled {
    const std::vector<double>* times = nullptr;
    const std::vector<GridField>* fields = nullptr;
    // constant-in-time view of a single field
    static TimeSampled constant(const GridField& f, const std::vector<double>& two_times,
                                std::vector<GridField>& storage);
};

// Single-shot B̃_m(u,v)(., t): global substitution s = t - tau^2 on a uniform
// tau grid, node count doubled until the sup-norm change is < tol.
GridField duhamel_bilinear(const TimeSampled& u, const TimeSampled& v,
                           const SampledFamily* sf, int m, double t,
                           double tol = 1e-8, int* nodes_used = nullptr);

// Whole-trajectory Duhamel sweep: panel recursion with the exact heat semigroup
// between masters; calls on_master(k, bhat) at every master k >= 1.
void duhamel_sweep(const GridSpec& g, const std::vector<double>& masters,
                   const std::vector<GridField>& u, const std::vector<GridField>& v,
                   bool symmetric, const SampledFamily* sf, int m, int tau_intervals,
                   const std::function<void(size_t, const std::vector<std::vector<cplx>>&)>&
                       on_master);

Trajectory picard_solve(const GridField& u0, const ControlProfileFamily& family,
                        const SolverConfig& cfg);
Trajectory timestep_solve(const GridField& u0, const ControlProfileFamily& family,
                          const SolverConfig& cfg);

// Residual of u(t) - e^{tΔ}u0 + B̃_m(u,u)(t) in the weighted sup norm, relative
// to the trajectory's X norm; also stored into traj.residuals.
std::vector<double> residual_check(Trajectory& traj, const ControlProfileFamily& family,
                                   const GridField& u0);

}  // namespace nsd
