#include <cmath>

#include "afrac/error.hpp"
#include "afrac/experiments.hpp"
#include "doctest.h"

using namespace afrac;

TEST_CASE("smooth step and cutoff") {
    CHECK(smooth_step(-1.0) == 0.0);
    CHECK(smooth_step(0.0) == 0.0);
    CHECK(smooth_step(1.0) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    double prev = 0.0;
    for (int i = 1; i < 100; ++i) {
        const double t = i / 100.0, v = smooth_step(t);
        CHECK(v >= prev);
        CHECK(v + smooth_step(1 - t) == doctest::Approx(1.0).epsilon(1e-14));
        prev = v;
    }
    CHECK(cutoff_theta({0.5, 0.5}) == 1.0);
    CHECK(cutoff_theta({2.0, 0.0}) == 0.0);
    CHECK(cutoff_theta({0.0, -3.0}) == 0.0);
    CHECK(cutoff_theta({1.5, 0.0}) == doctest::Approx(0.5));
}

TEST_CASE("log-log fit") {
    std::vector<double> x, y;
    for (int k = 0; k < 6; ++k) {
        x.push_back(std::ldexp(1.0, -k));
        y.push_back(3.0 * std::pow(x.back(), 0.37));
    }
    const auto f = fit_loglog(x, y);
    CHECK(f.slope == doctest::Approx(0.37).epsilon(1e-12));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
    y[2] *= 1.5;
    CHECK(fit_loglog(x, y).r2 < 0.99);
    CHECK_THROWS_AS(fit_loglog({1.0, 2.0}, {1.0, -1.0}), PreconditionError);
}

TEST_CASE("kernel integral of piecewise-linear data") {
    const double s = 0.3, cut = 0.5;
    std::vector<double> xs, ones, odd, ramp;
    for (int k = -60; k <= 60; ++k) {
        xs.push_back(k * 0.05);
        ones.push_back(1.0);
        odd.push_back(k * 0.05);
        ramp.push_back(k > 0 ? k * 0.05 : 0.0);
    }
    CHECK(line_kernel_integral(xs, ones, s, cut) ==
          doctest::Approx(2 * (std::pow(cut, -2 * s) - std::pow(3.0, -2 * s)) / (2 * s)).epsilon(1e-13));
    CHECK(std::abs(line_kernel_integral(xs, odd, s, cut)) <= 1e-13);
    CHECK(line_kernel_integral(xs, ramp, s, cut) ==
          doctest::Approx((std::pow(3.0, 1 - 2 * s) - std::pow(cut, 1 - 2 * s)) / (1 - 2 * s)).epsilon(1e-13));
}

TEST_CASE("barrier constancy run") {
    const auto b = barrier_constancy(0.5, 20, 4);
    CHECK(b.values.size() == 20);
    CHECK(b.mean == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(b.rel_std <= 1e-3);
    for (const auto& p : b.points) CHECK(norm(p) <= 0.9);
}

TEST_CASE("maximum principle battery") {
    const auto cases = maximum_principle_battery();
    CHECK(cases.size() == 20);
    for (const auto& c : cases) {
        CHECK_MESSAGE(c.negative_nodes == 0, c.domain << " " << c.g << " s=" << c.s);
        CHECK(c.min_u >= 0.0);
    }
}

TEST_CASE("counterexample tables") {
    const double s = 0.25, h = std::ldexp(1.0, -6);
    std::vector<double> etas;
    for (int e = 3; e <= 7; ++e) etas.push_back(std::ldexp(1.0, -e));
    const auto u = solve_problem(Domain::counterexample(), s, [](Vec2) { return 1.0; }, h).u;
    const auto base = counterexample_tables(u, s, etas);
    REQUIRE(base.rows.size() == 5);
    for (const auto& r : base.rows) {
        CHECK(r.j1 > 0.0);
        CHECK(r.u_boundary > 0.0);
    }
    CHECK(std::abs(base.gamma_boundary.slope - s) <= 0.1);
    CHECK(std::abs(base.gamma1.slope - s) <= 0.1);
    CHECK(base.gamma2.slope >= base.gamma1.slope + 0.05);
    // the exponent does not depend on where the cutoff makes its transition
    CounterexampleOptions narrow;
    narrow.cutoff_r0 = 1.2;
    narrow.cutoff_r1 = 1.8;
    const auto moved = counterexample_tables(u, s, etas, narrow);
    CHECK(std::abs(moved.gamma1.slope - base.gamma1.slope) < 0.05);
    CHECK(j1_integral(u, s, 0.125) == doctest::Approx(base.rows[0].j1));
    CHECK_THROWS_AS(counterexample_tables(u, s, {0.5, 0.25}), PreconditionError);
    CHECK(counterexample_svg(base).find("<svg") != std::string::npos);
}

TEST_CASE("gap probe on the same domain twice") {
    const auto g = regularity_gap_probe(0.25, {std::ldexp(1.0, -5)}, 1, true);
    REQUIRE(g.convex.size() == 1);
    CHECK(std::abs(g.gamma_convex - g.gamma_nonconvex) <= 1e-9);
}

TEST_CASE("convex experiment with zero data has nothing to fit") {
    CHECK_THROWS_AS(convex_regularity_experiment(0.25, {1.0 / 256}, 2, 0.0), NumericalError);
    CHECK_THROWS_AS(convex_regularity_experiment(0.25, {1.0 / 64}, 2), PreconditionError);
}
