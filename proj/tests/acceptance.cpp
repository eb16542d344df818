// One PASS/FAIL line per acceptance criterion. Exit status is 0 once every check has run;
// pass --strict to turn any FAIL into exit status 1, and criterion numbers to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "afrac/calibration.hpp"
#include "afrac/experiments.hpp"
#include "afrac/geometry.hpp"
#include "afrac/holder.hpp"
#include "afrac/lemma_lab.hpp"
#include "afrac/operator.hpp"
#include "afrac/quadrature.hpp"
#include "afrac/solver.hpp"

using namespace afrac;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

int threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// 1D constant of (1-x^2)^s_+ at x = 0 under the unit-symbol normalization, by direct quadrature.
double one_d_barrier_constant(double s) {
    const double kappa = std::tgamma(1.0 + 2.0 * s) * std::sin(M_PI * s) / (2.0 * M_PI);
    auto f = [s](double r) {
        if (r < 1e-100) return s * std::pow(r, 1.0 - 2.0 * s);
        return -std::expm1(s * std::log1p(-r * r)) * std::pow(r, -1.0 - 2.0 * s);
    };
    const double inner = quad::tanh_sinh(f, 0.0, 1.0, 1e-13);
    // two opposite atoms, each seeing the symmetric second difference
    return kappa * 4.0 * (inner + 1.0 / (2.0 * s));
}

Verdict barrier_constancy_check() {
    constexpr double kRelStd = 1e-3, kTol = 5e-3, kOracleTol = 1e-6;
    Verdict v{true, ""};
    for (double s : {0.25, 0.5, 0.75}) {
        const auto b = barrier_constancy(s, 20, 1, threads());
        v.pass = v.pass && b.rel_std <= kRelStd;
        v.detail += fmt("s=%.2f mean %.9f rel_std %.1e; ", s, b.mean, b.rel_std);
        if (s == 0.5) {
            const double co = one_d_barrier_constant(0.5);
            v.pass = v.pass && std::abs(co - 1.0) <= kOracleTol && std::abs(b.mean - 2.0 * co) <= kTol;
            v.detail += fmt("c_o %.9f; ", co);
        }
    }
    return v;
}

Verdict at1_ball_closed_form() {
    constexpr double kRel = 1e-6;
    Verdict v{true, ""};
    for (auto [R, r, s] : {std::tuple{1.0, 0.1, 0.5}, std::tuple{2.0, 0.3, 0.25}}) {
        const double q = at1_integral(Domain::ball({0, 0}, 3 * R), {0, 0}, R, r, {1, 0}, s);
        const double exact = (std::pow(3 * R - r, -2 * s) - std::pow(3 * R, -2 * s)) / (2 * s);
        const double rel = std::abs(q / exact - 1);
        v.pass = v.pass && rel <= kRel;
        v.detail += fmt("R=%g r=%g s=%g rel %.1e; ", R, r, s, rel);
    }
    return v;
}

Verdict at1_constant_battery() {
    constexpr double kSlack = 1e-3;
    Verdict v{true, ""};
    for (double s : {0.25, 0.5}) {
        const auto b = at1_battery(s, 200, 7, threads());
        const bool ok = b.violations == 0 && b.max_ratio <= at1_constant(s) * (1 + kSlack);
        v.pass = v.pass && ok && b.cases == 200;
        v.detail += fmt("s=%.2f max %.4f of %.4f, %d violations; ", s, b.max_ratio, at1_constant(s), b.violations);
    }
    return v;
}

Verdict cusp_growth() {
    constexpr double kGrowth = 4.0;
    Verdict v{true, ""};
    double prev = 0.0;
    for (int e : {8, 12, 16}) {
        const auto k = at1_cusp_lower_bound(1.0, std::ldexp(1.0, -e), 0.5);
        v.pass = v.pass && k.integral > k.bound;
        if (prev > 0.0) v.pass = v.pass && k.ratio >= kGrowth * prev;
        v.detail += fmt("r=2^-%d integral %.4e bound %.4e ratio %.4e; ", e, k.integral, k.bound, k.ratio);
        prev = k.ratio;
    }
    return v;
}

Verdict psi_limits() {
    constexpr double kRel = 0.02;
    Verdict v{true, ""};
    for (auto [s, a] : {std::pair{0.5, 1.2}, std::pair{0.25, 0.6}}) {
        const double one = psi(1.0, s, a), small = psi(1e-4, s, a), lim = 1 / (2 * s);
        v.pass = v.pass && one == 0.0 && std::abs(small / lim - 1) <= kRel;
        v.detail += fmt("(s,a)=(%g,%g) psi(1)=%g psi(1e-4)/lim=%.4f; ", s, a, one, small / lim);
    }
    return v;
}

Verdict at2_ball_sharpness() {
    constexpr double kRel = 1e-5;
    Verdict v{true, ""};
    for (auto [R, s, a] : {std::tuple{1.0, 0.5, 1.2}, std::tuple{2.0, 0.25, 0.6}}) {
        // the part of the ray where both points stay inside B_{3R} with joint distance <= 2R
        auto f = [&](double rho) { return std::pow(2 * R, s - a) * std::pow(rho, -1 - 2 * s); };
        const double q = quad::gauss_kronrod(f, R, 2 * R, 1e-12);
        const double closed = at2_ball_lower_bound(R, s, a);
        const double full = at2_integral(Domain::ball({0, 0}, 3 * R), {0, 0}, {0, 0}, R, a, {1, 0}, s);
        const double rel = std::abs(q / closed - 1);
        v.pass = v.pass && rel <= kRel && full >= closed;
        v.detail += fmt("R=%g s=%g alpha=%g rel %.1e full/lower %.4f; ", R, s, a, rel, full / closed);
    }
    return v;
}

Verdict solver_oracle() {
    constexpr double kErr = 1e-2;
    const double s = 0.5, co = barrier_constant(s, 1);
    Verdict v{true, ""};
    double prev = INFINITY;
    for (int e : {7, 8, 9, 10}) {
        const auto sol = solve_interval(-1, 1, s, [co](double) { return co; }, std::ldexp(1.0, -e));
        double err = 0.0;
        for (std::size_t i = 0; i < sol.x.size(); ++i)
            if (std::abs(sol.x[i]) <= 0.5) err = std::max(err, std::abs(sol.u[i] - std::sqrt(1 - sol.x[i] * sol.x[i])));
        v.pass = v.pass && err < prev;
        if (e == 10) v.pass = v.pass && err <= kErr;
        v.detail += fmt("h=2^-%d err %.3e; ", e, err);
        prev = err;
    }
    return v;
}

Verdict maximum_principle() {
    const auto cases = maximum_principle_battery(threads());
    std::size_t bad = 0;
    double min_u = INFINITY;
    for (const auto& c : cases) {
        bad += c.negative_nodes;
        min_u = std::min(min_u, c.min_u);
    }
    return {cases.size() == 20 && bad == 0,
            fmt("%zu cases, %zu negative nodes, min u %.3e", cases.size(), bad, min_u)};
}

Verdict counterexample_scaling() {
    constexpr double kWindow = 0.1, kSep = 0.05;
    const double s = 0.25;
    std::vector<double> etas;
    for (int e = 3; e <= 7; ++e) etas.push_back(std::ldexp(1.0, -e));
    CounterexampleOptions opt;
    opt.threads = threads();
    const auto x = counterexample_experiment(s, etas, std::ldexp(1.0, -6), opt);
    bool j1 = true;
    for (const auto& r : x.rows) j1 = j1 && r.j1 > 0;
    const bool r2 = x.gamma1.r2 >= kMinR2 && x.gamma2.r2 >= kMinR2 && x.gamma_boundary.r2 >= kMinR2;
    const bool pass = j1 && r2 && std::abs(x.gamma_boundary.slope - s) <= kWindow &&
                      std::abs(x.gamma1.slope - s) <= kWindow && x.gamma2.slope >= x.gamma1.slope + kSep;
    return {pass, fmt("boundary %.3f (r2 %.3f), gamma1 %.3f (r2 %.3f), gamma2 %.3f (r2 %.3f), J1>0 %s",
                      x.gamma_boundary.slope, x.gamma_boundary.r2, x.gamma1.slope, x.gamma1.r2, x.gamma2.slope,
                      x.gamma2.r2, j1 ? "yes" : "no")};
}

Verdict regularity_gap() {
    constexpr double kNonconvexMax = 0.95, kConvexMin = 1.3, kGap = 0.3, kAgree = 0.1;
    const auto g = regularity_gap_probe(0.25, {std::ldexp(1.0, -6), std::ldexp(1.0, -7)}, threads());
    bool reliable = true;
    std::string d;
    for (std::size_t i = 0; i < g.h.size(); ++i) {
        reliable = reliable && g.convex[i].reliable && g.nonconvex[i].reliable;
        d += fmt("h=%g convex %.3f (r2 %.3f) nonconvex %.3f (r2 %.3f); ", g.h[i], g.convex[i].gamma, g.convex[i].r2,
                 g.nonconvex[i].gamma, g.nonconvex[i].r2);
    }
    const bool agree = std::abs(g.convex[0].gamma - g.convex[1].gamma) <= kAgree &&
                       std::abs(g.nonconvex[0].gamma - g.nonconvex[1].gamma) <= kAgree;
    const bool pass = reliable && agree && g.gamma_nonconvex <= kNonconvexMax && g.gamma_convex >= kConvexMin &&
                      g.gamma_convex - g.gamma_nonconvex >= kGap;
    return {pass, d + fmt("gap %.3f%s", g.gamma_convex - g.gamma_nonconvex, reliable ? "" : ", r2 below 0.9")};
}

Verdict geometry_battery() {
    const auto ib = inner_ball_battery(1000, 3, 10000);
    const double band = band_battery_ratio(200000, 11);
    const Domain ce = Domain::counterexample();
    double annulus = 0.0;
    for (double R : {0.5, 1.0, 2.0, 4.0, 8.0}) annulus = std::max(annulus, annulus_boundary_area(ce, R) / R);
    const bool pass = ib.cases == 1000 && ib.violations == 0 && calibration::below(band, calibration::kBand) &&
                      std::isfinite(annulus) && calibration::below(annulus, calibration::kAnnulus);
    return {pass, fmt("inner ball %d/%d violations; band ratio %.6f (frozen %.6f); annulus/R max %.4f (frozen %.4f)",
                      ib.violations, ib.cases, band, calibration::kBand, annulus, calibration::kAnnulus)};
}

Verdict norm_machinery() {
    constexpr double kFit = 0.02;
    const auto fam = norm_family_ratio(Domain::ball({0, 0}, 1.0), 1.0 / 16, 0.3, 0.9, -0.25);
    bool pass = fam.ratios.size() == 20 && calibration::within(fam.max_ratio, calibration::kNormFamily);
    const auto a1 = split_alpha(1.0), a2 = split_alpha(2.0);
    pass = pass && a1.k == 0 && a1.alpha_prime == 1.0 && a2.k == 1 && a2.alpha_prime == 1.0;
    std::string d = fmt("family max %.6f (frozen %.6f); split(1)=(%d,%g); ", fam.max_ratio, calibration::kNormFamily,
                        a1.k, a1.alpha_prime);
    const auto scales = geometric_scales(1e-3, 1e-1, 2);
    for (double g : {0.3, 0.75, 1.5}) {
        auto u = [g](Vec2 x) { return std::pow(std::abs(x.x), g); };
        const auto f = local_exponent_fit(u, {0, 0}, {1, 0}, scales, g < 1 ? 1 : 2);
        pass = pass && std::abs(f.gamma - g) <= kFit;
        d += fmt("fit %.2f -> %.4f; ", g, f.gamma);
    }
    return {pass, d};
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
    bool strict = false;
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--strict") == 0)
            strict = true;
        else
            only.push_back(std::atoi(argv[i]));
    }
    const std::vector<Criterion> all = {
        {1, "barrier constancy", 30, barrier_constancy_check},
        {2, "at1 ball closed form", 5, at1_ball_closed_form},
        {3, "at1 explicit constant", 120, at1_constant_battery},
        {4, "cusp lower bound", 60, cusp_growth},
        {5, "psi limits", 5, psi_limits},
        {6, "at2 ball sharpness", 5, at2_ball_sharpness},
        {7, "1D solver oracle", 60, solver_oracle},
        {8, "discrete maximum principle", 300, maximum_principle},
        {9, "counterexample scaling", 900, counterexample_scaling},
        {10, "regularity gap", 1200, regularity_gap},
        {11, "geometry battery", 180, geometry_battery},
        {12, "norm machinery", 60, norm_machinery},
    };
    int failed = 0;
    int ran = 0;
    for (const auto& c : all) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        ++ran;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = v.pass && t <= c.limit_s;
        failed += !ok;
        std::printf("%s %2d %s: %s [%.1fs of %.0fs]\n", ok ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), t,
                    c.limit_s);
        std::fflush(stdout);
    }
    std::printf("%d of %d criteria pass\n", ran - failed, ran);
    return strict && failed ? 1 : 0;
}
