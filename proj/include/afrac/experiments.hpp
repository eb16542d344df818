#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "afrac/holder.hpp"
#include "afrac/solver.hpp"

namespace afrac {

// Smooth step: 0 for t <= 0, 1 for t >= 1, built from exp(-1/t).
double smooth_step(double t);
// 1 on B_{r0}, 0 outside B_{r1}.
double cutoff_theta(Vec2 x, double r0 = 1.0, double r1 = 2.0);

struct ProbeRecord {
    Vec2 x0;
    Vec2 direction;
    int order = 2;
    double h = 0.0;
    double gamma = 0.0;
    double r2 = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;
    bool reliable = false;  // r2 >= kMinR2
};

constexpr double kMinR2 = 0.9;

struct SolveRecord {
    std::string domain;
    double s = 0.0;
    double h = 0.0;
    SolveStats stats;
};

struct RegularityReport {
    std::vector<ProbeRecord> records;
    std::vector<SolveRecord> solves;
    double min_gamma = 0.0;  // over reliable records
    std::size_t reliable = 0;
};

struct ConvexExperiment {
    RegularityReport report;
    // per resolution: min gamma and the weighted-norm ratio
    std::vector<double> h;
    std::vector<double> min_gamma;
    std::vector<double> estimate_ratio;
};

// Ball(0,1), g = 1. Probes at |x0| <= 0.5 along axes and diagonals, scales [4h_max, 32h_max].
ConvexExperiment convex_regularity_experiment(double s, const std::vector<double>& h_list, int probe_count,
                                              double g_value = 1.0, int threads = 1);

struct CounterexampleRow {
    double eta = 0.0;
    double j1 = 0.0;
    double j2 = 0.0;
    double u_boundary = 0.0;  // u(-7, -eta)
};

struct LineFit {
    double slope = 0.0;
    double r2 = 0.0;
};

struct CounterexampleExperiment {
    std::vector<CounterexampleRow> rows;
    LineFit gamma1, gamma2, gamma_boundary;
    SolveRecord solve;
};

struct CounterexampleOptions {
    double cutoff_r0 = 1.0;
    double cutoff_r1 = 2.0;
    double eps_geom = 0.05;
    int threads = 1;
};

// Solves on the counterexample domain with g = 1 and tabulates J1, J2 and the boundary growth.
CounterexampleExperiment counterexample_experiment(double s, const std::vector<double>& eta_list, double h,
                                                   const CounterexampleOptions& opt = {});
// Same quantities from an existing solution.
CounterexampleExperiment counterexample_tables(const GridFunction& u, double s, const std::vector<double>& eta_list,
                                               const CounterexampleOptions& opt = {});

// 2 * int_{|rho| >= cut} (w(rho, -eta) - w(rho, 0)) |rho|^{-1-2s} drho with w = (1 - theta) u
double j1_integral(const GridFunction& u, double s, double eta, const CounterexampleOptions& opt = {});
// 2 * int_{|rho| >= cut} (w(0, rho - eta) - w(0, rho)) |rho|^{-1-2s} drho
double j2_integral(const GridFunction& u, double s, double eta, const CounterexampleOptions& opt = {});

// Integral of the piecewise-linear interpolant of (xs, vs) times |rho|^{-1-2s} over {|rho| >= cut}.
double line_kernel_integral(const std::vector<double>& xs, const std::vector<double>& vs, double s, double cut);

struct GapProbe {
    std::vector<double> h;
    std::vector<ProbeRecord> convex;     // Ball(0,4), one per resolution
    std::vector<ProbeRecord> nonconvex;  // counterexample domain
    double gamma_convex = 0.0;           // finest resolution
    double gamma_nonconvex = 0.0;
};

// Order-2 vertical exponent at (0, -0.05), scales [4h_max, 32h_max] at half octaves.
GapProbe regularity_gap_probe(double s, const std::vector<double>& h_list, int threads = 1,
                              bool ball_twice = false);

struct BarrierStats {
    std::vector<Vec2> points;
    std::vector<double> values;
    double mean = 0.0;
    double rel_std = 0.0;
    double max_rel_dev = 0.0;  // max |value - mean| / |mean|
};
// L applied to (1-|x|^2)^s_+ at `points` random points of B_1 with d >= 0.1, axis operator.
BarrierStats barrier_constancy(double s, int points, std::uint64_t seed = 1, int threads = 1);

struct MaxPrincipleCase {
    std::string domain;
    std::string g;
    double s = 0.0;
    double h = 0.0;
    double min_u = 0.0;
    std::size_t negative_nodes = 0;
};
// 20 solves with g >= 0 on balls, polygons and the counterexample domain, s in {0.25, 0.5}.
std::vector<MaxPrincipleCase> maximum_principle_battery(int threads = 1);

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Log-log plot of the counterexample tables.
std::string counterexample_svg(const CounterexampleExperiment& e);

}  // namespace afrac
