#include <cmath>

#include "afrac/error.hpp"
#include "afrac/spectral_measure.hpp"
#include "doctest.h"

using namespace afrac;

TEST_CASE("total mass of the basic measures") {
    CHECK(total_mass(SpectralMeasure::coordinate_axes(2)) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(total_mass(SpectralMeasure::uniform(1.0)) == doctest::Approx(2 * M_PI).epsilon(1e-14));
    CHECK(total_mass(SpectralMeasure(2)) == 0.0);
    SpectralMeasure half(2);
    half.add_density(0.0, M_PI, 1.0);
    CHECK(total_mass(half) == doctest::Approx(M_PI).epsilon(1e-14));
}

TEST_CASE("ellipticity of the axis measure and the uniform density") {
    const auto axes = SpectralMeasure::coordinate_axes(2);
    CHECK(std::abs(ellipticity_lambda(axes, 0.5, 3600) - 2.0) <= 1e-3);
    for (int n : {16, 97, 720}) CHECK(std::abs(ellipticity_lambda(SpectralMeasure::uniform(1.0), 0.5, n) - 4.0) <= 1e-6);
    // grid search over theta of 2(|cos|^{2s} + |sin|^{2s}) at s = 0.25
    double best = INFINITY;
    for (int i = 0; i < 100000; ++i) {
        const double t = M_PI * i / 100000;
        best = std::min(best, 2 * (std::pow(std::abs(std::cos(t)), 0.5) + std::pow(std::abs(std::sin(t)), 0.5)));
    }
    CHECK(ellipticity_lambda(axes, 0.25, 720) == doctest::Approx(best).epsilon(1e-9));
    CHECK(axes.is_elliptic(0.5));
}

TEST_CASE("a single atom is degenerate") {
    SpectralMeasure one(2);
    one.add_atom_angle(0.0, 1.0);
    CHECK(ellipticity_lambda(one, 0.5, 720) < 1e-12);
    CHECK_FALSE(one.is_elliptic(0.5));
    CHECK_THROWS_AS(ellipticity_lambda(SpectralMeasure(2), 0.5, 64), PreconditionError);
}

TEST_CASE("symmetrize takes the even part") {
    SpectralMeasure one(2);
    one.add_atom({1.0, 0.0}, 1.0);
    SpectralMeasure expect(2);
    expect.add_atom({1.0, 0.0}, 0.5).add_atom({-1.0, 0.0}, 0.5);
    CHECK(same_measure(symmetrize(one), expect));

    const auto axes = SpectralMeasure::coordinate_axes(2);
    CHECK(same_measure(symmetrize(axes), axes));

    SpectralMeasure half(2);
    half.add_density(0.0, M_PI, 1.0);
    const auto even = symmetrize(half);
    double covered = 0.0;
    for (const auto& p : even.density()) {
        CHECK(p.value == doctest::Approx(0.5));
        covered += p.b - p.a;
    }
    CHECK(covered == doctest::Approx(2 * M_PI));
}

TEST_CASE("symmetrize is idempotent and keeps the mass") {
    const auto m = parse_measure("atoms = [(10, 0.3), (200, 1.7), (95, 0.25)]; density = [(30, 100, 0.4), (300, 350, 2)]");
    const auto e = symmetrize(m);
    CHECK(same_measure(symmetrize(e), e));
    CHECK(std::abs(total_mass(e) - total_mass(m)) <= 1e-12);
}

TEST_CASE("adding an atom never lowers lambda") {
    auto m = parse_measure("atoms = [(0, 1), (180, 1), (90, 0.5)]");
    double prev = ellipticity_lambda(m, 0.4, 360);
    for (double deg : {33.0, 77.0, 140.0, 250.0}) {
        m.add_atom_angle(deg * M_PI / 180, 0.2);
        const double next = ellipticity_lambda(m, 0.4, 360);
        CHECK(next >= prev - 1e-15);
        prev = next;
    }
}

TEST_CASE("measure literals") {
    CHECK(same_measure(parse_measure("axes"), SpectralMeasure::coordinate_axes(2)));
    CHECK(same_measure(parse_measure("atoms = [(0,1),(90,1),(180,1),(270,1)]"), SpectralMeasure::coordinate_axes(2), 1e-12));
    CHECK(total_mass(parse_measure("uniform")) == doctest::Approx(2 * M_PI));
    CHECK_THROWS_AS(parse_measure("atoms = [(0, -1)]"), PreconditionError);
    CHECK_THROWS_AS(parse_measure("bogus"), PreconditionError);
}
