#include "afrac/lemma_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "afrac/error.hpp"
#include "afrac/experiments.hpp"
#include "afrac/grid.hpp"
#include "afrac/quadrature.hpp"
#include "afrac/rng.hpp"

namespace afrac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRayTol = 1e-11;
constexpr double kMarchFloor = 1e-5;      // relative minimum step when marching a ray
constexpr double kUnboundedReach = 50.0;  // rays in unbounded domains stop at this multiple of R
constexpr double kChordZone = 1e-7;
constexpr double kSampledTol = 1e-8;  // L evaluations feeding sampled seminorms

void check_s(double s) { require(s > 0.0 && s < 1.0, "s must lie in (0,1)"); }

Vec2 unit_or_throw(Vec2 w) {
    const double n = norm(w);
    require(n > 0.0 && std::isfinite(n), "direction must be a nonzero vector");
    return (1.0 / n) * w;
}

void require_inner_ball(const Domain& dom, Vec2 p, double R) {
    require(R > 0.0 && std::isfinite(R), "R must be positive");
    require(dom.contains(p) && dom.distance(p) >= R * (1.0 - 1e-12), "B_R(p) must lie inside the domain");
}

double signed_distance(const Domain& dom, Vec2 x) {
    const double d = dom.distance(x);
    return dom.contains(x) ? d : -d;
}

// Radius beyond which the ray has left a bounded domain for good.
double ray_reach(const Domain& dom, Vec2 p, double R) {
    const double br = dom.bounding_radius();
    if (std::isfinite(br)) return std::max(R * (1.0 + 1e-9), norm(p) + br + 1e-9);
    return kUnboundedReach * std::max(R, norm(p) + 1.0);
}

// Sorted radii in (a, b) where the signed distance along the ray crosses one of the levels.
std::vector<double> level_crossings(const Domain& dom, Vec2 p, Vec2 w, double a, double b,
                                    const std::vector<double>& levels) {
    std::vector<double> roots;
    auto sd = [&](double rho) { return signed_distance(dom, p + rho * w); };
    double rho = a, v = sd(a);
    while (rho < b) {
        double gap = kInf;
        for (double l : levels) gap = std::min(gap, std::abs(v - l));
        const double step = std::max(gap, kMarchFloor * std::max(rho, 1e-300));
        const double rn = std::min(rho + step, b);
        const double vn = sd(rn);
        for (double l : levels) {
            // a step may land exactly on the boundary, where sd is -0
            if ((v > l) != (vn > l)) {
                double lo = rho, hi = rn;
                const bool above = v > l;
                for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    ((sd(mid) > l) == above ? lo : hi) = mid;
                }
                roots.push_back(0.5 * (lo + hi));
            }
        }
        rho = rn;
        v = vn;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// Exit radius of a convex domain along the ray, inf if the ray never leaves.
double convex_exit(const Domain& dom, Vec2 p, Vec2 w, double R) {
    double lo = R * (1.0 - 1e-12), hi;
    const double br = dom.bounding_radius();
    if (std::isfinite(br)) {
        hi = norm(p) + br + 1.0;
    } else {
        hi = 2.0 * R;
        while (dom.contains(p + hi * w)) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e12 * R) return kInf;
        }
    }
    if (!dom.contains(p + lo * w)) return lo;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (dom.contains(p + mid * w) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Bisection for d(rho) = level on [a, b] where d - level changes sign.
double distance_root(const Domain& dom, Vec2 p, Vec2 w, double a, double b, double level) {
    const bool rising = dom.distance(p + a * w) < level;
    for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
        const double mid = 0.5 * (a + b);
        ((dom.distance(p + mid * w) < level) == rising ? a : b) = mid;
    }
    return 0.5 * (a + b);
}

// argmax of a concave function on [a, b]
double golden_max(const std::function<double(double)>& f, double a, double b) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && b - a > 1e-13 * b; ++it) {
        if (fc < fd) {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        }
    }
    return 0.5 * (a + b);
}

// tanh-sinh over [a, b] split at a geometric ladder, so the rho^{-1-2s} decay is resolved.
double ray_quad(const std::function<double(double)>& f, double a, double b, double tol = kRayTol) {
    double sum = 0.0;
    double lo = a;
    while (lo < b) {
        const double hi = std::min(b, 2.0 * lo);
        sum += quad::tanh_sinh(f, lo, hi, tol);
        lo = hi;
    }
    return sum;
}

// int_lo^hi D(rho)^gamma rho^{-1-2s} for a distance-like D that vanishes linearly at the
// endpoints flagged as crossings. Next to an endpoint D is replaced by its chord over a
// relative length kChordZone: evaluations that close only see rounding noise.
double crossing_quad(const std::function<double(double)>& D, double gamma, double s, double lo, double hi,
                     bool lo_cross, bool hi_cross, double tol) {
    const double len = hi - lo;
    const double u0 = kChordZone * len;
    const double at_lo = lo_cross ? 0.0 : std::max(D(lo), 0.0), at_hi = hi_cross ? 0.0 : std::max(D(hi), 0.0);
    const double in_lo = D(lo + u0), in_hi = D(hi - u0);
    auto w = [&](double rho, double d) { return std::pow(d, gamma) * std::pow(rho, -1.0 - 2.0 * s); };
    auto from_lo = [&](double u) { return w(lo + u, u < u0 ? at_lo + (in_lo - at_lo) * u / u0 : D(lo + u)); };
    auto from_hi = [&](double u) { return w(hi - u, u < u0 ? at_hi + (in_hi - at_hi) * u / u0 : D(hi - u)); };

    std::vector<double> x{lo};
    while (x.back() < hi) x.push_back(std::min(hi, 2.0 * x.back()));
    if (x.size() == 2) x.insert(x.begin() + 1, 0.5 * (lo + hi));
    const std::size_t n = x.size() - 1;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0)
            sum += quad::tanh_sinh(from_lo, 0.0, x[1] - lo, tol);
        else if (i == n - 1)
            sum += quad::tanh_sinh(from_hi, 0.0, hi - x[i], tol);
        else
            sum += quad::tanh_sinh([&](double r) { return w(r, D(r)); }, x[i], x[i + 1], tol);
    }
    return sum;
}

// int_b^inf f by rho = b / v
double ray_tail(const std::function<double(double)>& f, double b, double tol = kRayTol) {
    return quad::tanh_sinh(
        [&](double v) {
            const double rho = b / v;
            if (!(rho < 1e150)) return 0.0;  // beyond this the integrand has underflowed
            return f(rho) * b / (v * v);
        },
        0.0, 1.0, tol);
}

void hull_push(std::vector<Vec2>& h, Vec2 x, std::size_t floor) {
    while (h.size() >= floor + 2 && cross(h[h.size() - 1] - h[h.size() - 2], x - h[h.size() - 1]) <= 1e-12)
        h.pop_back();
    h.push_back(x);
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    std::vector<Vec2> h;
    for (Vec2 x : pts) hull_push(h, x, 0);
    const std::size_t lower = h.size() - 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) hull_push(h, pts[i], lower);
    h.pop_back();
    return h;
}

Vec2 random_inside(const Domain& dom, Rng& rng, double min_distance) {
    const Box b = dom.bbox();
    for (int it = 0; it < 100000; ++it) {
        const Vec2 x{rng.uniform(b.lo.x, b.hi.x), rng.uniform(b.lo.y, b.hi.y)};
        if (dom.contains(x) && dom.distance(x) > min_distance) return x;
    }
    throw NumericalError("could not sample an interior point");
}

Vec2 random_direction(Rng& rng) {
    const double t = rng.uniform(0.0, 2.0 * M_PI);
    return {std::cos(t), std::sin(t)};
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t k) {
    return seed * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL * (k + 1);
}

BatteryStats run_battery(int trials, int threads, double bound,
                         const std::function<double(std::size_t)>& ratio_of) {
    require(trials >= 1, "need at least one trial");
    std::vector<double> ratios(static_cast<std::size_t>(trials));
    parallel_for(ratios.size(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) ratios[k] = ratio_of(k);
    });
    BatteryStats out;
    out.cases = trials;
    out.bound = bound;
    for (double r : ratios) {
        out.max_ratio = std::max(out.max_ratio, r);
        if (!(r <= bound)) ++out.violations;
    }
    return out;
}

}  // namespace

Domain random_convex_domain(std::uint64_t seed) {
    Rng rng(seed);
    const int kind = static_cast<int>(rng.index(6));
    if (kind == 0) return Domain::ball({rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(0.5, 3.0));
    const Vec2 c{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double ax = rng.uniform(0.5, 3.0);
    // needles are long and thin
    const double ay = kind == 1 ? ax * rng.uniform(0.01, 0.05) : ax * rng.uniform(0.3, 1.0);
    const double rot = rng.uniform(0.0, M_PI);
    const int n = 3 + static_cast<int>(rng.index(15));
    for (;;) {
        std::vector<Vec2> pts;
        for (int i = 0; i < n; ++i) {
            const Vec2 u = rng.in_disk({0.0, 0.0}, 1.0);
            const Vec2 e{ax * u.x, ay * u.y};
            pts.push_back(c + Vec2{std::cos(rot) * e.x - std::sin(rot) * e.y, std::sin(rot) * e.x + std::cos(rot) * e.y});
        }
        auto h = convex_hull(pts);
        if (h.size() >= 3) return Domain::polygon(h);
    }
}

double at1_constant(double s) { return std::pow(2.0, 2.0 * s + 1.0); }

double at1_integral(const Domain& dom, Vec2 p, double R, double r, Vec2 omega, double s) {
    check_s(s);
    require(dom.convex(), "at1_integral needs a convex domain; use at1_integral_general");
    require_inner_ball(dom, p, R);
    require(r >= 0.0 && R > 2.0 * r, "need R > 2r >= 0");
    const Vec2 w = unit_or_throw(omega);
    if (r == 0.0) return 0.0;
    const double exit = convex_exit(dom, p, w, R);
    // a ray that never leaves keeps d >= R > r
    const double end = std::isfinite(exit) ? exit : 1e6 * R;
    auto d = [&](double rho) { return dom.distance(p + rho * w); };
    const double top = golden_max(d, R, end);
    if (d(top) <= r) return quad::power_kernel_integral(R, end, s);
    double sum = 0.0;
    if (d(R) <= r) sum += quad::power_kernel_integral(R, distance_root(dom, p, w, R, top, r), s);
    if (std::isfinite(exit)) sum += quad::power_kernel_integral(distance_root(dom, p, w, top, end, r), end, s);
    return sum;
}

double at1_integral_general(const Domain& dom, Vec2 p, double R, double r, Vec2 omega, double s) {
    check_s(s);
    require(R > 0.0 && r >= 0.0, "need R > 0 and r >= 0");
    const Vec2 w = unit_or_throw(omega);
    if (r == 0.0) return 0.0;
    const double reach = ray_reach(dom, p, R);
    auto cuts = level_crossings(dom, p, w, R, reach, {0.0, r});
    cuts.insert(cuts.begin(), R);
    cuts.push_back(reach);
    auto on = [&](double rho) {
        const double v = signed_distance(dom, p + rho * w);
        return v > 0.0 && v <= r;
    };
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i] && on(0.5 * (cuts[i] + cuts[i + 1])))
            sum += quad::power_kernel_integral(cuts[i], cuts[i + 1], s);
    if (on(reach)) sum += quad::power_kernel_integral(reach, kInf, s);
    return sum;
}

double at1_bound_check(const Domain& dom, Vec2 p, double R, double r, Vec2 omega, double s) {
    if (r == 0.0) return 0.0;
    return at1_integral(dom, p, R, r, omega, s) / (r * std::pow(R, -1.0 - 2.0 * s));
}

BatteryStats at1_battery(double s, int trials, std::uint64_t seed, int threads) {
    check_s(s);
    return run_battery(trials, threads, at1_constant(s) * (1.0 + 1e-3), [&](std::size_t k) {
        Rng rng(trial_seed(seed, k));
        const Domain dom = random_convex_domain(rng.raw());
        const Vec2 p = random_inside(dom, rng, 1e-3);
        const double R = dom.distance(p) * rng.uniform(0.3, 1.0);
        const double r = 0.5 * R * rng.uniform(0.01, 0.999);
        return at1_bound_check(dom, p, R, r, random_direction(rng), s);
    });
}

CuspCheck at1_cusp_lower_bound(double R, double r, double s) {
    check_s(s);
    require(R > 0.0 && r > 0.0 && r < R / M_E, "cusp check needs 0 < r < R/e");
    const Domain dom = Domain::cusp(R);
    CuspCheck out;
    out.r = r;
    out.integral = at1_integral_general(dom, {0.0, 0.0}, R, r, {1.0, 0.0}, s);
    out.bound = std::pow(R * std::log(R / r), -2.0 * s) / (2.0 * s);
    out.ratio = out.integral / (r * std::pow(R, -1.0 - 2.0 * s));
    return out;
}

double psi(double mu, double s, double alpha) {
    check_s(s);
    require(alpha >= s && alpha < 1.0 + s, "alpha must lie in [s, 1+s)");
    require(mu > 0.0 && mu <= 1.0, "mu must lie in (0, 1]");
    if (mu == 1.0) return 0.0;
    auto f = [&](double t) { return std::pow(1.0 - t, s - alpha) * std::pow(t, -1.0 - 2.0 * s); };
    double sum = 0.0, lo = mu;
    while (lo < 0.5) {
        const double hi = std::min(0.5, 2.0 * lo);
        sum += quad::tanh_sinh(f, lo, hi, 1e-12);
        lo = hi;
    }
    // u = 1 - t keeps the endpoint singularity at a representable 0
    sum += quad::tanh_sinh([&](double u) { return std::pow(u, s - alpha) * std::pow(1.0 - u, -1.0 - 2.0 * s); },
                           0.0, 1.0 - lo, 1e-12);
    return std::pow(mu, 2.0 * s) * sum;
}

double psi_sup(double s, double alpha) {
    double best = 1.0 / (2.0 * s);
    double arg = 1e-8;
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
        const double mu = std::pow(10.0, -8.0 + 8.0 * i / n);
        const double v = psi(std::min(mu, 1.0), s, alpha);
        if (v > best) {
            best = v;
            arg = mu;
        }
    }
    // refine around the grid maximum
    const double lo = arg * std::pow(10.0, -0.04), hi = std::min(1.0, arg * std::pow(10.0, 0.04));
    const double m = golden_max([&](double mu) { return psi(mu, s, alpha); }, lo, hi);
    return std::max(best, psi(m, s, alpha));
}

double at2_integral(const Domain& dom, Vec2 p, Vec2 q, double R, double alpha, Vec2 omega, double s) {
    check_s(s);
    require(alpha >= s && alpha < 1.0 + s, "alpha must lie in [s, 1+s)");
    require(dom.convex(), "at2_integral needs a convex domain");
    require_inner_ball(dom, p, R);
    require_inner_ball(dom, q, R);
    const Vec2 w = unit_or_throw(omega);
    const double end = std::min(convex_exit(dom, p, w, R), convex_exit(dom, q, w, R));
    auto joint = [&](double rho) { return std::min(dom.distance(p + rho * w), dom.distance(q + rho * w)); };
    const double stop = std::isfinite(end) ? end : 1e6 * R;
    for (int i = 1; i < 64; ++i) {
        const double rho = R + (stop - R) * i / 64.0;
        if (joint(rho) <= 0.0) throw NumericalError("non-integrable: the joint distance vanishes along the ray");
    }
    double sum = crossing_quad(joint, s - alpha, s, R, stop, false, std::isfinite(end), kRayTol);
    if (!std::isfinite(end))
        sum += ray_tail([&](double rho) { return std::pow(joint(rho), s - alpha) * std::pow(rho, -1.0 - 2.0 * s); }, stop);
    if (!std::isfinite(sum)) throw NumericalError("non-integrable: the joint distance vanishes along the ray");
    return sum;
}

double at2_simple_integral(const Domain& dom, Vec2 p, double R, double alpha, Vec2 omega, double s) {
    return at2_integral(dom, p, p, R, alpha, omega, s);
}

double at2_ball_lower_bound(double R, double s, double alpha) {
    return std::pow(R, -s - alpha) * std::pow(2.0, s - alpha) * (1.0 - std::pow(2.0, -2.0 * s)) / (2.0 * s);
}

BatteryStats at2_battery(double s, double alpha, int trials, std::uint64_t seed, int threads) {
    check_s(s);
    return run_battery(trials, threads, psi_sup(s, alpha) * (1.0 + 1e-3), [&](std::size_t k) {
        Rng rng(trial_seed(seed, k));
        const Domain dom = random_convex_domain(rng.raw());
        const Vec2 p = random_inside(dom, rng, 1e-3);
        const double R = dom.distance(p) * rng.uniform(0.3, 0.9);
        // q stays within the slack around B_R(p)
        const double slack = dom.distance(p) - R;
        Vec2 q = p + rng.uniform(0.0, slack) * random_direction(rng);
        if (!dom.contains(q) || dom.distance(q) < R) q = p;
        return at2_integral(dom, p, q, R, alpha, random_direction(rng), s) / std::pow(R, -s - alpha);
    });
}

double dist_tail_integral(const Domain& dom, Vec2 p, double R, Vec2 omega, double s) {
    check_s(s);
    require(R > 0.0, "R must be positive");
    require(norm(p) < R, "p must lie in B_R");
    require(dom.distance({0.0, 0.0}) <= 3.0 * R * (1.0 + 1e-12), "the closed ball of radius 3R must meet the boundary");
    const Vec2 w = unit_or_throw(omega);
    const double reach = ray_reach(dom, p, R);
    auto cuts = level_crossings(dom, p, w, R, reach, {0.0});
    cuts.insert(cuts.begin(), R);
    cuts.push_back(reach);
    auto f = [&](double rho) { return std::pow(dom.distance(p + rho * w), s) * std::pow(rho, -1.0 - 2.0 * s); };
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i]) sum += ray_quad(f, cuts[i], cuts[i + 1]);
    return sum + ray_tail(f, reach);
}

double dist_tail_constant(double s) {
    check_s(s);
    // t = 1/v turns (1+t)^s t^{-1-2s} dt into (1+v)^s v^{s-1} dv
    const double tail =
        quad::tanh_sinh([s](double v) { return std::pow(1.0 + v, s) * std::pow(v, s - 1.0); }, 0.0, 1.0, 1e-13);
    return std::pow(4.0, s) * tail;
}

BatteryStats dist_battery(double s, int trials, std::uint64_t seed, int threads) {
    check_s(s);
    return run_battery(trials, threads, dist_tail_constant(s) * (1.0 + 1e-3), [&](std::size_t k) {
        Rng rng(trial_seed(seed, k));
        const Domain dom = random_convex_domain(rng.raw());
        // smallest admissible R is a third of the distance from 0 to the boundary
        const double R = dom.distance({0.0, 0.0}) / 3.0 * rng.uniform(1.0001, 4.0);
        const Vec2 p = rng.in_disk({0.0, 0.0}, R * 0.999);
        return dist_tail_integral(dom, p, R, random_direction(rng), s) / std::pow(R, -s);
    });
}

namespace {

// Ray integral for the :bis modes along p + rho w (and q + rho w for the joint mode).
double bis_ray(const Domain& dom, BisMode mode, Vec2 p, Vec2 q, double R, double alpha, double s, double r, Vec2 w,
               double tol) {
    if (mode == BisMode::at1) return at1_integral_general(dom, p, R, r, w, s);
    if (mode == BisMode::dist) {
        const double reach = ray_reach(dom, p, R);
        auto cuts = level_crossings(dom, p, w, R, reach, {0.0});
        cuts.insert(cuts.begin(), R);
        cuts.push_back(reach);
        auto f = [&](double rho) { return std::pow(dom.distance(p + rho * w), s) * std::pow(rho, -1.0 - 2.0 * s); };
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            if (cuts[i + 1] > cuts[i]) sum += ray_quad(f, cuts[i], cuts[i + 1], tol);
        return sum + ray_tail(f, reach, tol);
    }
    const bool joint = mode == BisMode::at2;
    const double reach = std::max(ray_reach(dom, p, R), joint ? ray_reach(dom, q, R) : 0.0);
    auto cuts = level_crossings(dom, p, w, R, reach, {0.0});
    if (joint) {
        auto more = level_crossings(dom, q, w, R, reach, {0.0});
        cuts.insert(cuts.end(), more.begin(), more.end());
        std::sort(cuts.begin(), cuts.end());
    }
    cuts.insert(cuts.begin(), R);
    cuts.push_back(reach);
    auto inside = [&](double rho) {
        return dom.contains(p + rho * w) && (!joint || dom.contains(q + rho * w));
    };
    auto D = [&](double rho) {
        double d = dom.distance(p + rho * w);
        if (joint) d = std::min(d, dom.distance(q + rho * w));
        return d;
    };
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i] && inside(0.5 * (cuts[i] + cuts[i + 1])))
            sum += crossing_quad(D, s - alpha, s, cuts[i], cuts[i + 1], i > 0, i + 2 < cuts.size(), tol);
    // unbounded domains keep the weight frozen beyond the reach
    if (inside(reach))
        sum += ray_tail([&](double rho) { return std::pow(D(rho), s - alpha) * std::pow(rho, -1.0 - 2.0 * s); }, reach, tol);
    return sum;
}

}  // namespace

BisResult bis_integral(const Domain& dom, BisMode mode, Vec2 p, Vec2 q, double R, double alpha, double s,
                       double r, const BisOptions& opt) {
    check_s(s);
    require(dom.c11(), "the :bis integrals need a C^{1,1} boundary");
    require(opt.angles >= 8 && opt.mc_samples >= opt.angles, "need >= 8 angles and one sample per angle cell");
    BisResult out;
    switch (mode) {
        case BisMode::at1:
            require_inner_ball(dom, p, R);
            require(r > 0.0 && R > 2.0 * r, "need R > 2r > 0");
            out.scale = r * std::pow(R, -1.0 - 2.0 * s);
            break;
        case BisMode::at2:
            require_inner_ball(dom, q, R);
            [[fallthrough]];
        case BisMode::at2_simple:
            require_inner_ball(dom, p, R);
            require(alpha >= s && alpha < 1.0 + s, "alpha must lie in [s, 1+s)");
            out.scale = std::pow(R, -s - alpha);
            break;
        case BisMode::dist:
            require(norm(p) < R, "p must lie in B_R");
            require(dom.distance({0.0, 0.0}) <= 3.0 * R * (1.0 + 1e-12), "the closed ball of radius 3R must meet the boundary");
            out.scale = std::pow(R, -s);
            break;
    }
    const std::size_t n = static_cast<std::size_t>(opt.angles);
    const double dt = 2.0 * M_PI / opt.angles;
    auto ray = [&](double t) { return bis_ray(dom, mode, p, q, R, alpha, s, r, {std::cos(t), std::sin(t)}, opt.rel_tol); };

    std::vector<double> grid(n);
    parallel_for(n, opt.threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) grid[k] = ray(k * dt);
    });
    for (double v : grid) out.value += v * dt;

    // stratified: per cell, the same number of uniform draws; seeds per cell
    const std::size_t per = static_cast<std::size_t>(opt.mc_samples) / n;
    std::vector<double> mean(n), var(n);
    parallel_for(n, opt.threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            Rng rng(trial_seed(opt.seed, k));
            double m = 0.0, m2 = 0.0;
            for (std::size_t j = 0; j < per; ++j) {
                const double v = 2.0 * M_PI * ray((k + rng.uniform()) * dt);
                m += v;
                m2 += v * v;
            }
            m /= per;
            mean[k] = m;
            var[k] = per > 1 ? std::max(0.0, (m2 / per - m * m) * per / (per - 1.0)) : 0.0;
        }
    });
    double vsum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        out.mc_value += mean[k] / n;
        vsum += var[k] / per;
    }
    out.mc_stderr = std::sqrt(vsum) / n;
    out.ratio = out.value / out.scale;
    return out;
}

namespace {

struct Bump {
    Vec2 z;
    double radius;
    double c;
};

// w = (1 - theta(x/R)) sum c_i (radius_i - |x - z_i|)_+^s
struct CutoffFunction {
    std::vector<Bump> bumps;
    double R, s;

    double f(Vec2 x) const {
        double v = 0.0;
        for (const auto& b : bumps) {
            const double t = b.radius - norm(x - b.z);
            if (t > 0.0) v += b.c * std::pow(t, s);
        }
        return v;
    }
    double operator()(Vec2 x) const { return (1.0 - cutoff_theta((1.0 / R) * x)) * f(x); }
};

std::vector<double> circle_hits(Vec2 x, Vec2 w, Vec2 c, double radius) {
    const Vec2 z = x - c;
    const double b = dot(z, w);
    const double disc = b * b - (dot(z, z) - radius * radius);
    std::vector<double> out;
    if (disc <= 0.0) return out;
    const double sq = std::sqrt(disc);
    for (double r : {-b - sq, -b + sq})
        if (r > 0.0) out.push_back(r);
    return out;
}

double cutoff_seminorm(const CutoffFunction& w, const Domain& dom, Rng& rng) {
    double best = 0.0;
    auto quotient = [&](Vec2 a, Vec2 b) {
        const double t = norm(a - b);
        if (t <= 0.0) return 0.0;
        return std::abs(w(a) - w(b)) / std::pow(t, w.s);
    };
    const Box box = dom.bbox();
    const double diam = norm(box.hi - box.lo);
    for (int k = 0; k < 20000; ++k) {
        const Vec2 a{rng.uniform(box.lo.x, box.hi.x), rng.uniform(box.lo.y, box.hi.y)};
        const double t = diam * std::pow(10.0, -rng.uniform(0.0, 5.0));
        best = std::max(best, quotient(a, a + t * random_direction(rng)));
    }
    // pairs leaving each bump's rim radially inward, where (radius - |x - z|)^s is least regular
    for (const auto& b : w.bumps)
        for (int k = 0; k < 64; ++k) {
            const Vec2 e = random_direction(rng);
            const Vec2 rim = b.z + b.radius * e;
            for (double t = b.radius; t > 1e-6 * b.radius; t *= 0.5) best = std::max(best, quotient(rim, rim - t * e));
        }
    return best;
}

}  // namespace

CutoffCheck cutoff_w1_check(const Domain& dom, double R, double s, int trials, int probes, std::uint64_t seed,
                            int threads) {
    check_s(s);
    require(R > 0.0 && trials >= 1 && probes >= 1, "need R > 0, trials >= 1 and probes >= 1");
    require(dom.contains({0.0, 0.0}) && dom.distance({0.0, 0.0}) >= 2.0 * R * (1.0 - 1e-12), "B_{2R} must lie inside the domain");
    require(dom.distance({0.0, 0.0}) <= 3.0 * R * (1.0 + 1e-12), "the closed ball of radius 3R must meet the boundary");
    require(std::isfinite(dom.bounding_radius()), "the cutoff check needs a bounded domain");
    const auto axes = SpectralMeasure::coordinate_axes(2);
    QuadratureConfig qc;
    qc.rel_tol = kSampledTol;
    CutoffCheck out;
    out.trials = trials;
    out.probes = probes;
    std::vector<double> ratios(static_cast<std::size_t>(trials));
    parallel_for(ratios.size(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            Rng rng(trial_seed(seed, k));
            CutoffFunction w{{}, R, s};
            const int nb = 1 + static_cast<int>(rng.index(5));
            for (int i = 0; i < nb; ++i) {
                const Vec2 z = random_inside(dom, rng, 1e-2);
                w.bumps.push_back({z, dom.distance(z) * rng.uniform(0.2, 1.0), rng.uniform(-1.0, 1.0)});
            }
            TestFunction tf;
            tf.value = [w](Vec2 x) { return w(x); };
            double sup = 0.0;
            for (const auto& bb : w.bumps) sup += std::abs(bb.c) * std::pow(bb.radius, s);
            tf.sup_abs = sup;
            tf.support_radius = dom.bounding_radius();
            tf.kinks = [w](Vec2 x, Vec2 dir) {
                std::vector<double> out;
                for (const auto& bb : w.bumps) {
                    auto h = circle_hits(x, dir, bb.z, bb.radius);
                    out.insert(out.end(), h.begin(), h.end());
                    const double c = dot(bb.z - x, dir);
                    if (c > 0.0) out.push_back(c);
                }
                return out;
            };
            const double semi = cutoff_seminorm(w, dom, rng);
            double worst = 0.0;
            for (int j = 0; j < probes; ++j) {
                const Vec2 x = rng.in_disk({0.0, 0.0}, 0.5 * R);
                worst = std::max(worst, std::abs(apply_L_point(tf, x, axes, s, qc)));
            }
            ratios[k] = semi > 0.0 ? worst / (semi * std::pow(R, -s)) : 0.0;
        }
    });
    for (double r : ratios) out.max_ratio = std::max(out.max_ratio, r);
    return out;
}

namespace {

Vec2 fd_gradient(const std::function<double(Vec2)>& v, Vec2 x, double e) {
    return {(v(x + Vec2{e, 0}) - v(x - Vec2{e, 0})) / (2 * e), (v(x + Vec2{0, e}) - v(x - Vec2{0, e})) / (2 * e)};
}

std::array<double, 3> fd_hessian(const std::function<double(Vec2)>& v, Vec2 x, double e) {
    const double c = v(x);
    const double xx = (v(x + Vec2{e, 0}) - 2 * c + v(x - Vec2{e, 0})) / (e * e);
    const double yy = (v(x + Vec2{0, e}) - 2 * c + v(x - Vec2{0, e})) / (e * e);
    const double xy =
        (v(x + Vec2{e, e}) - v(x + Vec2{e, -e}) - v(x + Vec2{-e, e}) + v(x + Vec2{-e, -e})) / (4 * e * e);
    return {xx, xy, yy};
}

// Difference of the order-k derivative between a and b, as a Euclidean / Frobenius norm.
double derivative_gap(const std::function<double(Vec2)>& v, int k, Vec2 a, Vec2 b, double e) {
    if (k == 0) return std::abs(v(a) - v(b));
    if (k == 1) return norm(fd_gradient(v, a, e) - fd_gradient(v, b, e));
    const auto ha = fd_hessian(v, a, e), hb = fd_hessian(v, b, e);
    return std::sqrt((ha[0] - hb[0]) * (ha[0] - hb[0]) + 2 * (ha[1] - hb[1]) * (ha[1] - hb[1]) +
                     (ha[2] - hb[2]) * (ha[2] - hb[2]));
}

}  // namespace

LossCheck loss_2s_check(const TestFunction& v, double beta, double s, std::uint64_t seed) {
    check_s(s);
    require(beta > 0.0 && beta < 1.0, "beta must lie in (0,1)");
    const double gamma = beta + 2.0 * s;
    require(std::abs(gamma - 1.0) > 1e-9 && std::abs(gamma - 2.0) > 1e-9, "beta + 2s must not be an integer");
    require(std::isfinite(v.support_radius), "v needs a finite support radius");
    const int k = gamma < 1.0 ? 0 : (gamma < 2.0 ? 1 : 2);
    const double gp = gamma - k;
    Rng rng(seed);
    LossCheck out;

    // [v]_{gamma}: pairs across the support at log-uniform separations
    const double reach = v.support_radius;
    const double e = 1e-4 * reach;
    for (int i = 0; i < 6000; ++i) {
        const Vec2 a = rng.in_disk(v.center, reach);
        const double t = reach * std::pow(10.0, -rng.uniform(0.0, 2.5));
        const Vec2 b = a + t * random_direction(rng);
        out.v_seminorm = std::max(out.v_seminorm, derivative_gap(v.value, k, a, b, e) / std::pow(t, gp));
    }

    // [Lv]_{beta} on B_1
    const auto axes = SpectralMeasure::coordinate_axes(2);
    QuadratureConfig qc;
    qc.rel_tol = kSampledTol;
    std::vector<Vec2> pts;
    std::vector<double> lv;
    for (int i = 0; i < 48; ++i) {
        const Vec2 a = rng.in_disk({0.0, 0.0}, 0.95);
        // each point comes with a close partner so small separations are seen
        const Vec2 b = a + 0.02 * std::pow(10.0, -rng.uniform(0.0, 1.0)) * random_direction(rng);
        for (Vec2 x : {a, b}) {
            pts.push_back(x);
            lv.push_back(apply_L_point(v, x, axes, s, qc));
        }
    }
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double t = norm(pts[i] - pts[j]);
            if (t > 0.0) out.lv_seminorm = std::max(out.lv_seminorm, std::abs(lv[i] - lv[j]) / std::pow(t, beta));
        }
    out.ratio = out.v_seminorm > 0.0 ? out.lv_seminorm / out.v_seminorm : 0.0;
    return out;
}

std::vector<TestFunction> loss_2s_family(double beta, double s) {
    const double gamma = beta + 2.0 * s;
    std::vector<TestFunction> out;
    auto window = [](Vec2 x, Vec2 c, double r) { return 1.0 - smooth_step((norm(x - c) - 0.5 * r) / (0.5 * r)); };
    // Gaussians times a smooth window
    const double widths[] = {0.3, 0.5, 0.8, 1.2};
    const Vec2 centers[] = {{0.0, 0.0}, {0.4, -0.2}, {-0.5, 0.3}, {0.2, 0.6}};
    for (int i = 0; i < 4; ++i) {
        const double sig = widths[i];
        const Vec2 c = centers[i];
        TestFunction f;
        f.center = c;
        f.support_radius = 5.0 * sig;
        f.sup_abs = 1.0;
        f.value = [=](Vec2 x) { return std::exp(-dot(x - c, x - c) / (2 * sig * sig)) * window(x, c, 5.0 * sig); };
        out.push_back(f);
    }
    // plane waves under a window
    for (int i = 0; i < 3; ++i) {
        const double kx = 1.0 + i, ky = 0.5 * i;
        TestFunction f;
        f.support_radius = 3.0;
        f.sup_abs = 1.0;
        f.value = [=](Vec2 x) { return std::cos(kx * x.x + ky * x.y + 0.3 * i) * window(x, {0.0, 0.0}, 3.0); };
        out.push_back(f);
    }
    // anisotropic bumps
    for (int i = 0; i < 2; ++i) {
        const double ax = 0.4 + 0.3 * i, ay = 1.0 - 0.3 * i;
        TestFunction f;
        f.support_radius = 4.0;
        f.sup_abs = 1.0;
        f.value = [=](Vec2 x) {
            return std::exp(-(x.x * x.x) / (ax * ax) - (x.y * x.y) / (ay * ay)) * window(x, {0.0, 0.0}, 4.0);
        };
        out.push_back(f);
    }
    // |x - x0|^{beta+2s} with x0 outside B_2, windowed around x0
    {
        const Vec2 x0{2.5, 0.3};
        TestFunction f;
        f.center = x0;
        f.support_radius = 2.0;
        f.sup_abs = std::pow(2.0, gamma);
        f.value = [=](Vec2 x) { return std::pow(norm(x - x0), gamma) * window(x, x0, 2.0); };
        f.kinks = [=](Vec2 x, Vec2 w) {
            std::vector<double> k;
            const double c = dot(x0 - x, w);
            if (c > 0.0) k.push_back(c);
            return k;
        };
        out.push_back(f);
    }
    return out;
}

}  // namespace afrac
