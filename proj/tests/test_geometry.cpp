#include <algorithm>
#include <cmath>

#include "afrac/calibration.hpp"
#include "afrac/error.hpp"
#include "afrac/geometry.hpp"
#include "afrac/rng.hpp"
#include "doctest.h"

using namespace afrac;

namespace {

Domain unit_square() { return Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

double brute_distance(const Domain& d, Vec2 x) {
    const auto poly = boundary_polyline(d, 1 << 18);
    double best = INFINITY;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 a = poly[i], e = poly[(i + 1) % poly.size()] - a;
        const double t = std::clamp(dot(x - a, e) / std::max(dot(e, e), 1e-300), 0.0, 1.0);
        best = std::min(best, norm(x - (a + t * e)));
    }
    return best;
}

}  // namespace

TEST_CASE("distance examples") {
    const auto b3 = Domain::ball({0, 0}, 3);
    CHECK(b3.distance({0, 0}) == doctest::Approx(3.0).epsilon(1e-15));
    for (double rho : {0.0, 0.7, 1.5, 2.9})
        CHECK(std::abs(b3.distance(rho * unit(1.1)) - (3 - rho)) <= 1e-12);
    CHECK(unit_square().distance({0.5, 0.25}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(unit_square().distance({2.0, 0.5}) == doctest::Approx(1.0));
    CHECK(joint_distance(Domain::ball({0, 0}, 1), {0, 0}, {0.5, 0}) == doctest::Approx(0.5));
    CHECK(joint_distance(b3, {1, 0}, {2, 0}) == doctest::Approx(1.0));
    CHECK(joint_distance(b3, {0.3, 0.4}, {0.3, 0.4}) == doctest::Approx(b3.distance({0.3, 0.4})));
}

TEST_CASE("polygon distance matches the edge formula") {
    const auto tri = Domain::polygon({{0, 0}, {4, 0}, {0, 3}});
    CHECK(tri.convex());
    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        const Vec2 x{rng.uniform(-1, 5), rng.uniform(-1, 4)};
        // distance to the three segments by projection
        auto seg = [&](Vec2 a, Vec2 b) {
            const Vec2 d = b - a;
            const double t = std::clamp(dot(x - a, d) / dot(d, d), 0.0, 1.0);
            return norm(x - (a + t * d));
        };
        const double exact = std::min({seg({0, 0}, {4, 0}), seg({4, 0}, {0, 3}), seg({0, 3}, {0, 0})});
        CHECK(std::abs(tri.distance(x) - exact) <= 1e-9);
    }
}

TEST_CASE("distance is 1-Lipschitz and consistent with membership") {
    const Domain doms[] = {Domain::ball({0.2, -0.1}, 1.3), unit_square(), Domain::stadium(-1, 1, 0, 1),
                           Domain::counterexample(), Domain::cusp(1.0)};
    for (const auto& d : doms) {
        const Box b = d.bbox();
        const double pad = 0.5;
        Rng rng(17);
        auto draw = [&] {
            return Vec2{rng.uniform(std::max(b.lo.x, -30.0) - pad, std::min(b.hi.x, 30.0) + pad),
                        rng.uniform(std::max(b.lo.y, -30.0) - pad, std::min(b.hi.y, 30.0) + pad)};
        };
        int bad = 0, mismatch = 0;
        for (int i = 0; i < 10000; ++i) {
            const Vec2 x = draw();
            const Vec2 y = i % 2 ? draw() : x + Vec2{rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)};
            if (std::abs(d.distance(x) - d.distance(y)) > norm(x - y) + 1e-9) ++bad;
            // a ball of radius d(x) around x never crosses the boundary
            const double dx = d.distance(x);
            if (dx > 1e-9 && d.contains(x) != d.contains(x + 0.999 * dx * unit(rng.uniform(0, 2 * M_PI)))) ++mismatch;
        }
        CHECK_MESSAGE(bad == 0, d.describe());
        CHECK(mismatch == 0);
    }
}

TEST_CASE("analytic distances agree with a dense boundary polyline") {
    const Domain doms[] = {Domain::ball({0, 0}, 2), unit_square(), Domain::stadium(-1, 1, 0, 1), Domain::counterexample()};
    Rng rng(3);
    for (const auto& d : doms) {
        const Box b = d.bbox();
        for (int i = 0; i < 40; ++i) {
            const Vec2 x{rng.uniform(b.lo.x, b.hi.x), rng.uniform(b.lo.y, b.hi.y)};
            // chord sagitta of the polyline is below 1e-7 at 2^18 vertices
            CHECK_MESSAGE(std::abs(d.distance(x) - brute_distance(d, x)) <= 1e-6, d.describe() << " " << x.x << "," << x.y << " " << d.distance(x));
        }
    }
}

TEST_CASE("counterexample domain structure") {
    const auto ce = Domain::counterexample();
    Rng rng(23);
    SUBCASE("the ball of radius 4 is inside") {
        for (int i = 0; i < 5000; ++i) CHECK(ce.contains(rng.in_disk({0, 0}, 3.999)));
    }
    SUBCASE("flat boundary segment with the domain just below") {
        for (int i = 0; i <= 200; ++i) {
            const double rho = -8.0 + 2.0 * i / 200;
            CHECK(ce.distance({rho, 0}) <= 1e-9);
            for (double t : {1e-6, 1e-3, 0.05, 0.099}) CHECK(ce.contains({rho, -t}));
        }
    }
    SUBCASE("vertical axis section") {
        for (int i = 0; i <= 400; ++i) {
            const double y = -3.99 + 7.98 * i / 400;
            CHECK(ce.contains({0, y}));
        }
        for (double y : {4.01, 5.0, 10.0, 19.0}) {
            CHECK_FALSE(ce.contains({0, y}));
            CHECK_FALSE(ce.contains({0, -y}));
        }
    }
    SUBCASE("horizontal axis inside between the wall and the ball") {
        for (int i = 1; i < 1000; ++i) CHECK(ce.contains({-6.0 + 10.0 * i / 1000, 0.0}));
    }
    SUBCASE("left of the segment the axis stays outside") {
        for (int i = 0; i < 1000; ++i) {
            const Vec2 x{-20.0 + (12.0 - 1e-3) * i / 999, 0.0};
            CHECK_FALSE(ce.contains(x));
            CHECK(ce.distance(x) > 0.0);
        }
    }
    SUBCASE("tangent interior balls of radius 1/2") {
        for (int i = 0; i <= 100; ++i) CHECK(ce.distance({-8.0 + 2.0 * i / 100, -0.5}) >= 0.5 - 1e-9);
    }
    SUBCASE("bounded by 20") {
        CHECK(ce.bounding_radius() <= 20.0);
        for (const auto& p : boundary_polyline(ce, 20000)) CHECK(norm(p) < 20.0);
    }
}

TEST_CASE("inner ball formula") {
    GraphPatch flat{QuadraticSpline::flat(), 1.0, 1.0};
    auto b = inner_sphere_center(flat, {0, 0}, 1.0, 1.0);
    CHECK(b.q.x == 0.0);
    CHECK(b.q.y == doctest::Approx(0.5));
    CHECK(b.r == doctest::Approx(0.5));
    CHECK(verify_inner_ball(flat, {0, 0.5}, 0.5, 10000));
    CHECK_FALSE(verify_inner_ball(flat, {0, 0.5}, 0.6, 10000));

    GraphPatch par{QuadraticSpline::parabola(0.5), 1.0, 1.0};
    b = inner_sphere_center(par, {0, 0}, 1.0, 1.0);
    CHECK(b.q.y == doctest::Approx(0.5));
    b = inner_sphere_center(par, {0.5, 0.125}, 1.0, 1.0);
    const double n = std::sqrt(1.25);
    CHECK(b.q.x == doctest::Approx(0.5 - 0.5 * 0.5 / n).epsilon(1e-14));
    CHECK(b.q.y == doctest::Approx(0.125 + 0.5 / n).epsilon(1e-14));
    CHECK(b.r == 0.5);
    CHECK(verify_inner_ball(par, b.q, b.r, 10000));
    CHECK_THROWS_AS(inner_sphere_center(par, {1.2, 0.72}, 1.0, 1.0), PreconditionError);
}

TEST_CASE("inner ball battery") {
    const auto r = inner_ball_battery(300, 9);
    CHECK(r.cases == 300);
    CHECK(r.violations == 0);
}

TEST_CASE("band measure examples") {
    const auto b3 = Domain::ball({0, 0}, 3);
    const auto m = band_measure(b3, {0, 0}, 1, 5, 0.1, 400000, 2);
    CHECK(std::abs(m.band_volume - M_PI * (9 - 8.41)) <= 4 * m.std_error);
    CHECK(m.boundary_area == doctest::Approx(6 * M_PI).epsilon(1e-4));
    // inner band of the unit square: 1 - (1 - 2 mu)^2
    const auto q = band_measure(unit_square(), {0.5, 0.5}, 0.1, 10, 0.05, 400000, 2);
    CHECK(std::abs(q.band_volume - 0.19) <= 4 * q.std_error);
    CHECK(q.boundary_area == doctest::Approx(4.0).epsilon(1e-4));
    double prev = INFINITY;
    for (double mu : {0.1, 0.01, 0.001}) {
        const double v = band_measure(b3, {0, 0}, 1, 5, mu, 100000, 4).band_volume;
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 0.05);
    CHECK_THROWS_AS(band_measure(b3, {0, 0}, 5, 1, 0.1, 100000), PreconditionError);
}

TEST_CASE("band battery stays at its frozen maximum") {
    CHECK(calibration::within(band_battery_ratio(200000, 11), calibration::kBand));
}

TEST_CASE("boundary length in dyadic annuli") {
    const auto b3 = Domain::ball({0, 0}, 3);
    CHECK(annulus_boundary_area(b3, 1.0) == doctest::Approx(6 * M_PI).epsilon(1e-4));
    CHECK(annulus_boundary_area(b3, 4.0) == 0.0);
    const auto ce = Domain::counterexample();
    double worst = 0.0;
    for (double R : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double a = annulus_boundary_area(ce, R);
        CHECK(std::isfinite(a));
        worst = std::max(worst, a / R);
    }
    CHECK(calibration::within(worst, calibration::kAnnulus));
    CHECK(annulus_boundary_area(ce, 5.0) <= calibration::kAnnulus * 5.0);
}

TEST_CASE("level sets of the distance") {
    GraphPatch flat{QuadraticSpline::flat(), 1.0, 1.0};
    CHECK(level_set_lipschitz_probe(flat, 0.05, 200) <= 1e-9);
    GraphPatch wedge{QuadraticSpline::smoothed_abs(0.5), 2.0, 1.0};
    const double t = 0.02, k = level_set_lipschitz_probe(wedge, t, 400);
    // exact offset curve: base point x with x - t h'(x)/sqrt(1+h'^2) = kappa*, slope h'(x) = x/eps
    double x = 0.1;
    for (int i = 0; i < 50; ++i) x = 0.1 + t * (2 * x) / std::sqrt(1 + 4 * x * x);
    CHECK(k == doctest::Approx(2 * x).epsilon(5e-3));
    CHECK(k <= 1.0);
    GraphPatch par{QuadraticSpline::parabola(0.5), 1.0, 1.0};
    CHECK(level_set_lipschitz_probe(par, 0.1, 200) <= 0.2);
    CHECK_THROWS_AS(level_set_lipschitz_probe(par, 0.2, 200), PreconditionError);
}

TEST_CASE("domain literals") {
    CHECK(parse_domain("ball(0,0,1)").kind() == DomainKind::ball);
    CHECK(parse_domain("polygon((0,0),(1,0),(0,1))").convex());
    CHECK(parse_domain("counterexample(0.05)").kind() == DomainKind::arc_chain);
    CHECK_FALSE(parse_domain("counterexample(0.05)").convex());
    CHECK(parse_domain("cusp(1)").kind() == DomainKind::cusp);
    CHECK_THROWS(parse_domain("ball(0,0)"));
    CHECK_THROWS(parse_domain("donut(1)"));
    CHECK_THROWS(parse_domain("ball(0,0,-1)"));
}
