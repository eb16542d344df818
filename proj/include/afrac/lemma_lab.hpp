#pragma once

#include <cstdint>
#include <vector>

#include "afrac/geometry.hpp"
#include "afrac/operator.hpp"

namespace afrac {

// Ray integrals over [R, inf) along p + rho*omega with the weight rho^{-1-2s}.

// Integrand chi_Omega * chi_[0,r](d). Convex domains only; the support is located
// exactly (concavity of d along the ray plus bisection), so the result is closed form.
double at1_integral(const Domain& dom, Vec2 p, double R, double r, Vec2 omega, double s);
// Same integrand on any domain, by marching the signed distance along the ray.
// Unbounded domains freeze the integrand beyond 50 max(R, |p|+1).
double at1_integral_general(const Domain& dom, Vec2 p, double R, double r, Vec2 omega, double s);
// 2^{2s+1}
double at1_constant(double s);
// at1_integral / (r R^{-1-2s})
double at1_bound_check(const Domain& dom, Vec2 p, double R, double r, Vec2 omega, double s);

struct BatteryStats {
    int cases = 0;
    int violations = 0;
    double max_ratio = 0.0;
    double bound = 0.0;  // the ratio each case is held against
};

// Random convex polygons (including needles) and balls, random p, omega, R, r.
BatteryStats at1_battery(double s, int trials, std::uint64_t seed, int threads = 1);

struct CuspCheck {
    double r = 0.0;
    double integral = 0.0;
    double bound = 0.0;  // (1/(2s)) (R log(R/r))^{-2s}
    double ratio = 0.0;  // integral / (r R^{-1-2s})
};
// p = 0, omega = e1 on the cusp domain of radius R; needs r < R/e.
CuspCheck at1_cusp_lower_bound(double R, double r, double s);

// mu^{2s} int_mu^1 (1-t)^{s-alpha} t^{-1-2s} dt for mu in (0, 1].
double psi(double mu, double s, double alpha);
// sup over (0, 1], including the limit 1/(2s) at 0.
double psi_sup(double s, double alpha);

// Integrand chi chi d^{s-alpha}(p + rho w, q + rho w) with the joint distance. Convex domains.
// Throws NumericalError when d vanishes inside the support.
double at2_integral(const Domain& dom, Vec2 p, Vec2 q, double R, double alpha, Vec2 omega, double s);
double at2_simple_integral(const Domain& dom, Vec2 p, double R, double alpha, Vec2 omega, double s);
// R^{-s-alpha} 2^{s-alpha} (1 - 2^{-2s}) / (2s)
double at2_ball_lower_bound(double R, double s, double alpha);
// Ratio at2 / R^{-s-alpha} over random convex domains with p != q. bound = psi_sup.
BatteryStats at2_battery(double s, double alpha, int trials, std::uint64_t seed, int threads = 1);

// Integrand d^s(p + rho w), d the distance to the boundary (also outside the domain).
double dist_tail_integral(const Domain& dom, Vec2 p, double R, Vec2 omega, double s);
// 4^s int_1^inf (1+t)^s t^{-1-2s} dt
double dist_tail_constant(double s);
// Ratio dist / R^{-s} over random convex domains with a boundary point in B_{3R}.
BatteryStats dist_battery(double s, int trials, std::uint64_t seed, int threads = 1);

// Integrals over R^2 \ B_R of the same integrands with |x|^{-2-2s}, for C^{1,1} domains.
enum class BisMode { at1, at2_simple, at2, dist };

struct BisOptions {
    int angles = 256;
    int mc_samples = 4096;  // stratified over the angle cells
    std::uint64_t seed = 1;
    int threads = 1;
    double rel_tol = 1e-8;  // per ray
};

struct BisResult {
    double value = 0.0;      // periodic trapezoid over the angles
    double mc_value = 0.0;   // stratified Monte Carlo in the angle
    double mc_stderr = 0.0;
    double scale = 0.0;      // r R^{-1-2s}, R^{-s-alpha} or R^{-s}
    double ratio = 0.0;      // value / scale
};

BisResult bis_integral(const Domain& dom, BisMode mode, Vec2 p, Vec2 q, double R, double alpha, double s,
                       double r, const BisOptions& opt = {});

// max over trials and probes in B_{R/2} of |Lw| / ([w]_{C^s} R^{-s}) for random w that vanish on
// B_R and outside the domain (axis operator).
struct CutoffCheck {
    double max_ratio = 0.0;
    int trials = 0;
    int probes = 0;
};
CutoffCheck cutoff_w1_check(const Domain& dom, double R, double s, int trials, int probes = 50,
                            std::uint64_t seed = 1, int threads = 1);

struct LossCheck {
    double lv_seminorm = 0.0;  // [Lv]_{C^beta(B_1)}
    double v_seminorm = 0.0;   // [v]_{C^{beta+2s}}
    double ratio = 0.0;        // 0 when both vanish
};
// v needs finite support (center, support_radius). Axis operator.
LossCheck loss_2s_check(const TestFunction& v, double beta, double s, std::uint64_t seed = 1);
// Ten smooth compactly supported functions, the last one carrying |x - x0|^{beta+2s} with x0 outside B_2.
std::vector<TestFunction> loss_2s_family(double beta, double s);

// Random convex polygon: hull of random points, sometimes a thin needle.
Domain random_convex_domain(std::uint64_t seed);

}  // namespace afrac
