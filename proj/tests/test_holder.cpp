#include <cmath>

#include "afrac/calibration.hpp"
#include "afrac/error.hpp"
#include "afrac/holder.hpp"
#include "afrac/operator.hpp"
#include "doctest.h"

using namespace afrac;

namespace {

const Domain unit_ball = Domain::ball({0, 0}, 1);
auto in_ball = [](Vec2 x) { return dot(x, x) < 1.0; };

}  // namespace

TEST_CASE("alpha splitting") {
    auto a = split_alpha(0.7);
    CHECK(a.k == 0);
    CHECK(a.alpha_prime == doctest::Approx(0.7));
    a = split_alpha(1.0);
    CHECK(a.k == 0);
    CHECK(a.alpha_prime == 1.0);
    a = split_alpha(1.75);
    CHECK(a.k == 1);
    CHECK(a.alpha_prime == doctest::Approx(0.75));
    a = split_alpha(2.0);
    CHECK(a.k == 1);
    CHECK(a.alpha_prime == 1.0);
    for (double al : {0.01, 0.5, 0.999999, 1.000001, 1.3, 2.2, 2.9999}) {
        const auto p = split_alpha(al);
        CHECK(p.k + p.alpha_prime == doctest::Approx(al).epsilon(1e-15));
        CHECK(p.alpha_prime > 0.0);
        CHECK(p.alpha_prime <= 1.0);
    }
    CHECK_THROWS_AS(split_alpha(0.0), PreconditionError);
}

TEST_CASE("Holder norm examples") {
    const double h = 1.0 / 32;
    const auto five = GridFunction::sample(unit_ball, h, [](Vec2) { return 5.0; });
    CHECK(holder_norm(five, 0.5, in_ball) == doctest::Approx(5.0).epsilon(1e-14));
    // sup |x1| + max |x1 - y1| / |x - y|^{1/2} over the closed ball is 1 + sqrt(2)
    const auto lin = GridFunction::sample(unit_ball, h, [](Vec2 x) { return x.x; });
    // grid search over the same nodes; the small node set means every pair is used
    std::vector<Vec2> nodes;
    for (int j = 0; j < lin.ny(); ++j)
        for (int i = 0; i < lin.nx(); ++i)
            if (lin.interior(i, j) && in_ball(lin.node(i, j))) nodes.push_back(lin.node(i, j));
    double sup = 0.0, quot = 0.0;
    for (std::size_t a = 0; a < nodes.size(); ++a) {
        sup = std::max(sup, std::abs(nodes[a].x));
        for (std::size_t b = a + 1; b < nodes.size(); ++b)
            quot = std::max(quot, std::abs(nodes[a].x - nodes[b].x) / std::sqrt(norm(nodes[a] - nodes[b])));
    }
    const double v = holder_norm(lin, 0.5, in_ball);
    CHECK(v == doctest::Approx(sup + quot).epsilon(1e-12));
    CHECK(v <= 1 + std::sqrt(2.0));
    CHECK(v >= 1 + std::sqrt(2.0) - 0.1);
    CHECK_THROWS_AS(holder_norm(lin, 0.5, [](Vec2 x) { return norm(x) < 0.05; }), PreconditionError);
}

TEST_CASE("shrinking the region never increases the norm") {
    const auto u = GridFunction::sample(unit_ball, 1.0 / 32, [](Vec2 x) { return std::sin(3 * x.x) * std::cos(2 * x.y); });
    double prev = INFINITY;
    for (double r : {1.0, 0.7, 0.4}) {
        const double n = holder_norm(u, 0.6, [r](Vec2 x) { return norm(x) < r; });
        CHECK(n <= prev + 1e-14);
        prev = n;
    }
}

TEST_CASE("barrier Holder norm is stable under refinement") {
    const double s = 0.5;
    std::vector<double> n;
    for (double h : {1.0 / 32, 1.0 / 64}) {
        const auto u = GridFunction::sample(Domain::ball({0, 0}, 1.5), h, [s](Vec2 x) { return barrier(x, s); });
        n.push_back(holder_norm(u, s, [](Vec2 x) { return norm(x) < 1.4; }));
    }
    CHECK(std::isfinite(n[0]));
    CHECK(n[1] == doctest::Approx(n[0]).epsilon(0.1));
}

TEST_CASE("weighted norm examples") {
    const double h = 1.0 / 32;
    const auto one = GridFunction::sample(unit_ball, h, [](Vec2) { return 1.0; });
    const auto w = weighted_norm(one, unit_ball, 0.5, 1.0);
    CHECK(w.k == 0);
    CHECK(w.sup_terms.size() == 1);
    CHECK(w.sup_terms[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(w.seminorm == 0.0);
    CHECK(w.total == doctest::Approx(1.0));

    const auto u = GridFunction::sample(unit_ball, h, [](Vec2 x) { return std::exp(x.x) * std::sin(2 * x.y) + 0.3; });
    const auto base = weighted_norm(u, unit_ball, 1.4, -0.3);
    double sum = base.seminorm;
    for (double t : base.sup_terms) sum += t;
    CHECK(base.total == doctest::Approx(sum).epsilon(1e-14));
    CHECK(base.k == 1);
    auto scaled = u.like();
    for (std::size_t k = 0; k < u.size(); ++k) scaled.set(k, -2.5 * u.at(k));
    const auto sw = weighted_norm(scaled, unit_ball, 1.4, -0.3);
    for (std::size_t j = 0; j < base.sup_terms.size(); ++j)
        CHECK(sw.sup_terms[j] == doctest::Approx(2.5 * base.sup_terms[j]).epsilon(1e-13));
    CHECK(sw.seminorm == doctest::Approx(2.5 * base.seminorm).epsilon(1e-13));
    CHECK(sw.total == doctest::Approx(2.5 * base.total).epsilon(1e-13));
    CHECK_THROWS_AS(weighted_norm(u, unit_ball, 1.4, -3.0), PreconditionError);
}

TEST_CASE("norm comparisons") {
    const auto zero = GridFunction::sample(unit_ball, 1.0 / 16, [](Vec2) { return 0.0; });
    const auto z = norm_monotonicity_check(zero, unit_ball, 0.3, 0.9, -0.25);
    CHECK(z.both_zero);
    CHECK(z.ratio == 0.0);
    const auto u = GridFunction::sample(unit_ball, 1.0 / 16, [](Vec2 x) { return std::cos(x.x + 2 * x.y); });
    CHECK(norm_monotonicity_check(u, unit_ball, 0.6, 0.6, -0.25).ratio == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(norm_monotonicity_check(u, unit_ball, 0.9, 0.3, -0.25), PreconditionError);
}

TEST_CASE("function family ratio: frozen value and refinement") {
    const auto coarse = norm_family_ratio(unit_ball, 1.0 / 16, 0.3, 0.9, -0.25);
    CHECK(coarse.ratios.size() == 20);
    CHECK(calibration::within(coarse.max_ratio, calibration::kNormFamily));
    const auto fine = norm_family_ratio(unit_ball, 1.0 / 32, 0.3, 0.9, -0.25);
    CHECK(std::abs(fine.max_ratio / coarse.max_ratio - 1) <= 0.15);
}

TEST_CASE("exponent fits on exact powers") {
    const auto scales = geometric_scales(1e-3, 1e-1, 2);
    CHECK(scales.size() >= 5);
    CHECK(scales.front() == doctest::Approx(1e-3));
    for (double g : {0.3, 0.75, 1.5}) {
        const auto f = local_exponent_fit([g](Vec2 x) { return std::pow(std::abs(x.x), g); }, {0, 0}, {1, 0}, scales,
                                          static_cast<int>(std::ceil(g)));
        CHECK(std::abs(f.gamma - g) <= 0.02);
        CHECK(f.r2 >= 0.999);
    }
    const auto q = local_exponent_fit([](Vec2 x) { return 3 * x.y * x.y - x.x; }, {0.2, 0.1}, {0, 1}, scales, 2);
    CHECK(std::abs(q.gamma - 2.0) <= 0.02);
    // the barrier grows like d^s at the boundary
    const double s = 0.3;
    const auto b = local_exponent_fit([s](Vec2 x) { return barrier(x, s); }, {1, 0}, {-1, 0},
                                      geometric_scales(1e-6, 1e-4, 2), 1);
    CHECK(std::abs(b.gamma - s) <= 0.02);
    CHECK_THROWS_AS(local_exponent_fit([](Vec2) { return 1.0; }, {0, 0}, {1, 0}, scales, 1), NumericalError);
    CHECK_THROWS_AS(local_exponent_fit([](Vec2 x) { return x.x; }, {0, 0}, {1, 0}, geometric_scales(1e-3, 2e-3, 4), 1),
                    PreconditionError);
}

TEST_CASE("exponent fit on a grid function") {
    const double h = 1.0 / 256;
    const auto u = GridFunction::sample(unit_ball, h, [](Vec2 x) { return x.x * x.x + 0.5 * x.y; });
    const auto f = local_exponent_fit(u, {0.1, 0.0}, {1, 0}, geometric_scales(4 * h, 32 * h, 2), 2);
    CHECK(std::abs(f.gamma - 2.0) <= 0.02);
    CHECK_THROWS_AS(local_exponent_fit(u, {0.1, 0.0}, {1, 0}, geometric_scales(h, 8 * h, 2), 2), PreconditionError);
    CHECK_THROWS_AS(local_exponent_fit(u, {0.9, 0.0}, {1, 0}, geometric_scales(4 * h, 64 * h, 2), 1), PreconditionError);
}
