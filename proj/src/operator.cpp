#include "afrac/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "afrac/error.hpp"
#include "afrac/quadrature.hpp"
#include "afrac/simd.hpp"
#include "axis_apply.hpp"

namespace afrac {

namespace {

constexpr double kMaxTail = 1e6;
// Below split_radius * kModelFraction the second difference is too noisy to integrate
// directly; a two-term even model takes over there.
constexpr double kModelFraction = 1.0 / 16.0;
constexpr double kInnerTol = 1e-9;
// the inner integrand is smooth in v; deeper bisection only chases roundoff when D2 is near 0
constexpr unsigned kInnerDepth = 8;

double second_difference(const TestFunction& u, Vec2 x, Vec2 w, double u0, double rho) {
    return 2.0 * u0 - u.value(x + rho * w) - u.value(x - rho * w);
}

void check_c2(const TestFunction& u, Vec2 x, Vec2 w, double u0, double delta) {
    double d2[4];
    const double noise = 1e-13 * std::max(1.0, std::abs(u0));
    for (int k = 0; k < 4; ++k) {
        const double rho = delta * std::ldexp(1.0, -k);
        const double diff = second_difference(u, x, w, u0, rho);
        if (std::abs(diff) <= noise) return;
        d2[k] = std::abs(diff) / (rho * rho);
    }
    // a genuine kink makes D2 grow geometrically at every halving
    for (int k = 0; k < 3; ++k)
        if (d2[k + 1] < 1.3 * d2[k]) return;
    throw NumericalError("function is not C^2 at the evaluation point (second difference does not scale like rho^2)");
}

struct RayParts {
    double partial = 0.0;   // everything except the unresolved tail
    double halfwidth = 0.0; // the unresolved tail lies in [-halfwidth, halfwidth]
};

RayParts ray_parts(const TestFunction& u, Vec2 x, Vec2 w, double s, const QuadratureConfig& q) {
    const double u0 = u.value(x);
    const double delta = q.split_radius;
    const unsigned depth = static_cast<unsigned>(q.max_subdivisions);
    check_c2(u, x, w, u0, delta);
    auto diff = [&](double rho) { return second_difference(u, x, w, u0, rho); };

    // [0, rho_c]: D2 = a + b rho^2 fitted at rho_c and 2 rho_c
    const double rho_c = delta * kModelFraction;
    const double d2a = diff(rho_c) / (rho_c * rho_c);
    const double d2b = diff(2.0 * rho_c) / (4.0 * rho_c * rho_c);
    const double b = (d2b - d2a) / (3.0 * rho_c * rho_c);
    const double a = d2a - b * rho_c * rho_c;
    double inner = a * quad::moment1(0.0, rho_c, s) +
                   b * std::pow(rho_c, 4.0 - 2.0 * s) / (4.0 - 2.0 * s);
    // [rho_c, delta]: rho = delta * v^p makes the integrand D2(rho) * delta^{2-2s} * p
    const double p = 1.0 / (2.0 - 2.0 * s);
    const double v_c = std::pow(kModelFraction, 1.0 / p);
    inner += std::pow(delta, 2.0 - 2.0 * s) * p *
             quad::gauss_kronrod(
                 [&](double v) {
                     const double rho = delta * std::pow(v, p);
                     return diff(rho) / (rho * rho);
                 },
                 v_c, 1.0, std::max(q.rel_tol, kInnerTol), std::min(depth, kInnerDepth));

    double far_start = q.tail_radius;
    bool exact_tail = false;
    if (std::isfinite(u.support_radius)) {
        far_start = std::max(delta, norm(x - u.center) + u.support_radius);
        exact_tail = true;
    }
    std::vector<double> knots{delta};
    for (double r = delta * 10.0; r < far_start; r *= 10.0) knots.push_back(r);
    if (u.kinks) {
        for (Vec2 dir : {w, -1.0 * w})
            for (double r : u.kinks(x, dir))
                if (r > delta && r < far_start) knots.push_back(r);
    }
    knots.push_back(far_start);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end(),
                            [](double l, double r) { return std::abs(l - r) <= 1e-14 * std::max(1.0, r); }),
                knots.end());
    double middle = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        middle += quad::tanh_sinh([&](double rho) { return diff(rho) * std::pow(rho, -1.0 - 2.0 * s); },
                                  knots[i], knots[i + 1], q.rel_tol);

    RayParts out;
    const double beyond = quad::power_kernel_integral(far_start, INFINITY, s);
    if (exact_tail) {
        out.partial = inner + middle + 2.0 * (u0 - u.far_value) * beyond;
    } else {
        require(std::isfinite(u.sup_abs), "unbounded support needs a finite sup bound");
        out.partial = inner + middle + 2.0 * u0 * beyond;
        out.halfwidth = 2.0 * u.sup_abs * beyond;
    }
    return out;
}

Vec2 direction_of(const Atom& atom) {
    require(atom.direction.size() == 2, "pointwise evaluation is two-dimensional");
    return {atom.direction[0], atom.direction[1]};
}

}  // namespace

double normalization_constant(double s, Normalization norm) {
    if (norm == Normalization::raw) return 1.0;
    return std::tgamma(1.0 + 2.0 * s) * std::sin(std::numbers::pi * s) / (2.0 * std::numbers::pi);
}

void QuadratureConfig::validate() const {
    require(split_radius > 0.0 && tail_radius > split_radius, "quadrature needs 0 < split_radius < tail_radius");
    require(rel_tol > 1e-14 && rel_tol < 1e-2, "rel_tol must lie in (1e-14, 1e-2)");
    require(max_subdivisions >= 1, "max_subdivisions must be positive");
}

PointEvaluation ray_integral(const TestFunction& u, Vec2 x, Vec2 omega, double s, const QuadratureConfig& q) {
    q.validate();
    require(s > 0.0 && s < 1.0, "s must lie in (0,1)");
    const RayParts r = ray_parts(u, x, omega, s, q);
    return {r.partial, r.partial - r.halfwidth, r.partial + r.halfwidth, q.tail_radius};
}

PointEvaluation evaluate_L_point(const TestFunction& u, Vec2 x, const SpectralMeasure& a, double s,
                                 const QuadratureConfig& q0) {
    q0.validate();
    require(s > 0.0 && s < 1.0, "s must lie in (0,1)");
    require(a.dimension() == 2, "pointwise evaluation is two-dimensional");
    require(static_cast<bool>(u.value), "test function has no value callable");
    QuadratureConfig q = q0;
    const double kappa = normalization_constant(s, q.normalization);
    for (;;) {
        double partial = 0.0, halfwidth = 0.0;
        for (const Atom& atom : a.atoms()) {
            if (atom.weight == 0.0) continue;
            const RayParts r = ray_parts(u, x, direction_of(atom), s, q);
            partial += atom.weight * r.partial;
            halfwidth += atom.weight * r.halfwidth;
        }
        for (const DensityPiece& piece : a.density()) {
            if (piece.value == 0.0) continue;
            double hw = 0.0;
            const double integral = quad::gauss_kronrod(
                [&](double theta) {
                    const RayParts r = ray_parts(u, x, unit(theta), s, q);
                    hw = r.halfwidth;
                    return r.partial;
                },
                piece.a, piece.b, q.rel_tol, 8);
            partial += piece.value * integral;
            halfwidth += piece.value * (piece.b - piece.a) * hw;
        }
        partial *= kappa;
        halfwidth *= kappa;
        if (2.0 * halfwidth <= q.rel_tol * std::abs(partial) || halfwidth == 0.0)
            return {partial, partial - halfwidth, partial + halfwidth, q.tail_radius};
        if (q.tail_radius >= kMaxTail)
            throw NumericalError("tail bound cannot reach the tolerance with truncation radius <= 1e6");
        q.tail_radius = std::min(kMaxTail, q.tail_radius * 10.0);
    }
}

double apply_L_point(const TestFunction& u, Vec2 x, const SpectralMeasure& a, double s, const QuadratureConfig& q) {
    return evaluate_L_point(u, x, a, s, q).value;
}

double barrier(Vec2 x, double s) {
    const double r2 = dot(x, x);
    return r2 < 1.0 ? std::pow(1.0 - r2, s) : 0.0;
}

TestFunction barrier_function(double s, Vec2 center, double radius) {
    TestFunction f;
    f.value = [=](Vec2 y) { return barrier((1.0 / radius) * (y - center), s); };
    f.sup_abs = 1.0;
    f.center = center;
    f.support_radius = radius;
    f.far_value = 0.0;
    f.kinks = [=](Vec2 x, Vec2 w) {
        const Vec2 z = x - center;
        const double b = dot(z, w);
        const double c = dot(z, z) - radius * radius;
        const double disc = b * b - c;
        std::vector<double> out;
        if (disc <= 0.0) return out;
        const double sq = std::sqrt(disc);
        for (double r : {-b - sq, -b + sq})
            if (r > 0.0) out.push_back(r);
        return out;
    };
    return f;
}

double barrier_constant(double s, int n) { return n * std::tgamma(1.0 + 2.0 * s); }

DirectionalWeights directional_weights(double s, int m) {
    require(s > 0.0 && s < 1.0, "s must lie in (0,1)");
    require(m >= 2, "need at least two weights");
    DirectionalWeights out;
    out.w.resize(static_cast<std::size_t>(m));
    // cell [j, j+1] against the hats centred at j and j+1
    auto a_coef = [s](double j) {
        return (j + 1.0) * quad::power_kernel_integral(j, j + 1.0, s) - quad::moment0(j, j + 1.0, s);
    };
    auto b_coef = [s](double j) {
        return quad::moment0(j, j + 1.0, s) - j * quad::power_kernel_integral(j, j + 1.0, s);
    };
    const double near = quad::moment1(0.0, 1.0, s);  // quadratic model on the first cell
    double prev_b = 0.0;
    for (int k = 1; k <= m; ++k) {
        out.w[k - 1] = a_coef(k) + prev_b + (k == 1 ? near : 0.0);
        prev_b = b_coef(k);
    }
    out.tail = prev_b + quad::power_kernel_integral(m + 1.0, INFINITY, s);
    out.total = near + 1.0 / (2.0 * s);
    return out;
}

std::vector<double> line_band(double s, int n, double scale) {
    require(n >= 1, "line length must be positive");
    const DirectionalWeights dw = directional_weights(s, std::max(n - 1, 2));
    std::vector<double> band(2 * static_cast<std::size_t>(n) - 1);
    band[n - 1] = 2.0 * dw.total * scale;
    for (int k = 1; k < n; ++k) band[n - 1 + k] = band[n - 1 - k] = -dw.w[k - 1] * scale;
    return band;
}

namespace detail {

void axis_apply(const double* vals, const std::uint8_t* mask, int nx, int ny, const std::vector<double>& band_x,
                const std::vector<double>& band_y, double* res, int threads) {
    const int nmax = std::max(nx, ny);
    const auto& k = simd::active();
    const std::size_t stride = static_cast<std::size_t>(nx);
    if (!band_x.empty()) {
        parallel_for(static_cast<std::size_t>(ny), threads, [&](std::size_t b, std::size_t e) {
            for (std::size_t j = b; j < e; ++j) {
                const std::size_t row = j * stride;
                int first = 0, last = nx - 1;
                while (first < nx && !mask[row + first]) ++first;
                if (first == nx) continue;
                while (!mask[row + last]) --last;
                const int n = last - first + 1;
                k.toeplitz(band_x.data() + (nmax - n), vals + row + first, n, mask + row + first, res + row + first);
            }
        });
    }
    if (!band_y.empty()) {
        parallel_for(static_cast<std::size_t>(nx), threads, [&](std::size_t b, std::size_t e) {
            std::vector<double> v(ny), acc(ny);
            std::vector<std::uint8_t> m(ny);
            for (std::size_t i = b; i < e; ++i) {
                int first = 0, last = ny - 1;
                while (first < ny && !mask[first * stride + i]) ++first;
                if (first == ny) continue;
                while (!mask[last * stride + i]) --last;
                const int n = last - first + 1;
                for (int t = 0; t < n; ++t) {
                    const std::size_t idx = (first + t) * stride + i;
                    v[t] = vals[idx];
                    m[t] = mask[idx];
                    acc[t] = 0.0;
                }
                k.toeplitz(band_y.data() + (nmax - n), v.data(), n, m.data(), acc.data());
                for (int t = 0; t < n; ++t)
                    if (m[t]) res[(first + t) * stride + i] += acc[t];
            }
        });
    }
}

}  // namespace detail

GridFunction apply_axis_grid(const GridFunction& u, double s, std::array<double, 2> coeffs, Normalization norm,
                             int threads) {
    require(s > 0.0 && s < 1.0, "s must lie in (0,1)");
    require(u.interior_count() > 0, "no grid node lies inside the domain");
    require(coeffs[0] >= 0.0 && coeffs[1] >= 0.0, "axis coefficients must be nonnegative");
    GridFunction out = u.like();
    const int nmax = std::max(u.nx(), u.ny());
    const double base = 2.0 * normalization_constant(s, norm) * std::pow(u.h(), -2.0 * s);
    const std::vector<double> band_x = coeffs[0] > 0.0 ? line_band(s, nmax, base * coeffs[0]) : std::vector<double>{};
    const std::vector<double> band_y = coeffs[1] > 0.0 ? line_band(s, nmax, base * coeffs[1]) : std::vector<double>{};
    detail::axis_apply(u.values().data(), u.mask().data(), u.nx(), u.ny(), band_x, band_y, out.data(), threads);
    return out;
}

GridFunction apply_RI_grid(const GridFunction& u, double s, Normalization norm, int threads) {
    return apply_axis_grid(u, s, {1.0, 1.0}, norm, threads);
}

}  // namespace afrac
