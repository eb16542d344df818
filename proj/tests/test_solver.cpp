#include <cmath>

#include "afrac/error.hpp"
#include "afrac/operator.hpp"
#include "afrac/solver.hpp"
#include "doctest.h"

using namespace afrac;

namespace {

void check_m_matrix(const CsrMatrix& a) {
    int bad_sign = 0, bad_sym = 0, not_dominant = 0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        double diag = 0.0, off = 0.0;
        for (auto k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
            const auto c = static_cast<std::size_t>(a.cols[k]);
            if (c == r) {
                diag = a.vals[k];
            } else {
                off += std::abs(a.vals[k]);
                bad_sign += a.vals[k] > 0.0;
                bad_sym += std::abs(a.vals[k] - a.entry(c, r)) > 1e-12 * std::abs(a.vals[k]);
            }
        }
        bad_sign += diag <= 0.0;
        not_dominant += diag <= off;
    }
    CHECK(bad_sign == 0);
    CHECK(bad_sym == 0);
    CHECK(not_dominant == 0);
}

// max |u(x) - u(y)| / |x - y|^s over node pairs on common grid lines, exterior zeros included
double line_holder_quotient(const GridFunction& u, double s) {
    double q = 0.0;
    for (int j = 0; j < u.ny(); ++j)
        for (int i = 0; i < u.nx(); ++i) {
            for (int k = i + 1; k < u.nx(); ++k)
                q = std::max(q, std::abs(u.at(i, j) - u.at(k, j)) / std::pow((k - i) * u.h(), s));
            for (int k = j + 1; k < u.ny(); ++k)
                q = std::max(q, std::abs(u.at(i, j) - u.at(i, k)) / std::pow((k - j) * u.h(), s));
        }
    return q;
}

}  // namespace

TEST_CASE("1D assembly") {
    const auto sys = assemble_interval(-1, 1, 0.5, std::ldexp(1.0, -6));
    CHECK(sys.size() == 127);
    CHECK(sys.dimension() == 1);
    REQUIRE(sys.has_matrix());
    check_m_matrix(sys.matrix());
}

TEST_CASE("2D assembly on a ball") {
    const auto sys = assemble(Domain::ball({0, 0}, 1), SpectralMeasure::coordinate_axes(2), 0.3, std::ldexp(1.0, -5));
    REQUIRE(sys.has_matrix());
    check_m_matrix(sys.matrix());
    CHECK_THROWS_AS(assemble(Domain::ball({0, 0}, 1), parse_measure("atoms = [(45, 1), (225, 1)]"), 0.3, 0.1),
                    PreconditionError);
}

TEST_CASE("assembled matrix reproduces the grid operator") {
    const double s = 0.4, h = 1.0 / 32;
    const auto dom = Domain::ball({0, 0}, 1);
    const auto sys = assemble(dom, SpectralMeasure::coordinate_axes(2), s, h);
    const auto u = GridFunction::sample(dom, h, [s](Vec2 x) { return barrier(x, s); });
    const auto lu = apply_RI_grid(u, s);
    REQUIRE(sys.layout().size() == u.size());
    std::vector<double> x(sys.size()), y(sys.size()), z(sys.size());
    for (std::size_t k = 0; k < sys.size(); ++k) x[k] = u.at(sys.node_of()[k]);
    sys.apply(x.data(), y.data());
    const auto mf = assemble(dom, SpectralMeasure::coordinate_axes(2), s, h, false);
    CHECK_FALSE(mf.has_matrix());
    mf.apply(x.data(), z.data());
    for (std::size_t k = 0; k < sys.size(); ++k) {
        CHECK(std::abs(y[k] - lu.at(sys.node_of()[k])) <= 1e-12 * std::max(1.0, std::abs(y[k])));
        CHECK(std::abs(z[k] - y[k]) <= 1e-12 * std::max(1.0, std::abs(y[k])));
    }
}

TEST_CASE("1D barrier solution") {
    const double s = 0.5, co = barrier_constant(s, 1);
    double prev = INFINITY;
    for (int e : {7, 8, 9, 10}) {
        const auto sol = solve_interval(-1, 1, s, [co](double) { return co; }, std::ldexp(1.0, -e));
        CHECK(sol.stats.residual <= 1e-10);
        double err = 0.0;
        for (std::size_t i = 0; i < sol.x.size(); ++i)
            if (std::abs(sol.x[i]) <= 0.5) err = std::max(err, std::abs(sol.u[i] - std::sqrt(1 - sol.x[i] * sol.x[i])));
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev <= 1e-2);
}

TEST_CASE("zero data gives the zero solution") {
    const auto sol = solve_problem(Domain::ball({0, 0}, 1), 0.3, [](Vec2) { return 0.0; }, 1.0 / 16);
    for (double v : sol.u.values()) CHECK(v == 0.0);
}

TEST_CASE("maximum principle, symmetry and monotonicity in the data") {
    const auto dom = Domain::ball({0, 0}, 1);
    const double s = 0.25, h = 1.0 / 32;
    auto g1 = [](Vec2 x) { return std::max(0.0, 0.3 - x.x * x.x); };
    auto g2 = [g1](Vec2 x) { return g1(x) + 0.5 * std::exp(-4 * dot(x, x)); };
    const auto u1 = solve_problem(dom, s, g1, h).u;
    const auto u2 = solve_problem(dom, s, g2, h).u;
    const auto one = solve_problem(dom, s, [](Vec2) { return 1.0; }, h);
    CHECK(one.stats.residual <= 1e-10);
    int neg = 0, order = 0, asym = 0;
    const auto& u = one.u;
    for (int j = 0; j < u.ny(); ++j)
        for (int i = 0; i < u.nx(); ++i) {
            neg += u1.at(i, j) < 0.0;
            order += u1.at(i, j) > u2.at(i, j) + 1e-13;
            const int mi = u.nx() - 1 - i, mj = u.ny() - 1 - j;
            for (double w : {u.at(mi, j), u.at(i, mj), u.at(mi, mj)}) asym += std::abs(u.at(i, j) - w) > 1e-9;
        }
    // the covering grid is symmetric about the origin
    CHECK(u.node(0, 0).x == doctest::Approx(-u.node(u.nx() - 1, 0).x));
    CHECK(neg == 0);
    CHECK(order == 0);
    CHECK(asym == 0);
}

TEST_CASE("counterexample solution stays under the big-ball barrier bound") {
    const double s = 0.25;
    const auto sol = solve_problem(Domain::counterexample(), s, [](Vec2) { return 1.0; }, std::ldexp(1.0, -6));
    double lo = INFINITY, hi = 0.0;
    for (std::size_t k = 0; k < sol.u.size(); ++k)
        if (sol.u.interior(k)) {
            lo = std::min(lo, sol.u.at(k));
            hi = std::max(hi, sol.u.at(k));
        }
    CHECK(lo > 0.0);
    // (1 - |x|^2/400)^s / (20^{-2s} c) is a supersolution on B_20
    CHECK(hi <= std::pow(20.0, 2 * s) / barrier_constant(s));
}

TEST_CASE("global C^s quotient stays bounded under refinement") {
    const double s = 0.25;
    std::vector<double> q;
    for (int e : {4, 5, 6}) {
        const auto sol = solve_problem(Domain::ball({0, 0}, 1), s, [](Vec2) { return 1.0; }, std::ldexp(1.0, -e));
        q.push_back(line_holder_quotient(sol.u, s));
    }
    CHECK(q[1] <= 1.1 * q[0]);
    CHECK(q[2] <= 1.1 * q[1]);
}

TEST_CASE("solver rejects degenerate input") {
    CHECK_THROWS_AS(assemble_interval(-1, 1, 1.5, 0.1), PreconditionError);
    CHECK_THROWS_AS(assemble(Domain::ball({0, 0}, 0.01), SpectralMeasure::coordinate_axes(2), 0.5, 0.5),
                    PreconditionError);
}
