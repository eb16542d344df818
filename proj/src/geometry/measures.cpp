#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>
#include <sstream>
#include <vector>

#include "afrac/error.hpp"
#include "afrac/rng.hpp"
#include "shape.hpp"

namespace afrac {

InnerBall inner_sphere_center(const GraphPatch& patch, Vec2 p, double kappa, double K) {
    require(kappa > 0.0 && K >= 0.0, "inner ball needs kappa > 0 and K >= 0");
    require(norm(p) < kappa, "boundary point lies outside the patch ball B_kappa");
    require(std::abs(p.y - patch.h.value(p.x)) <= 1e-9 * std::max(1.0, std::abs(p.y)),
            "point is not on the graph boundary");
    const double r = 0.5 * (K > 0.0 ? std::min(kappa, 1.0 / K) : kappa);
    const double g = patch.h.slope(p.x);
    const double s = std::sqrt(g * g + 1.0);
    return {{p.x - r * g / s, p.y + r / s}, r};
}

bool verify_inner_ball(const GraphPatch& patch, Vec2 q, double r, int samples, std::uint64_t seed) {
    require(samples >= 100, "inner ball verification needs at least 100 samples");
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        const Vec2 x = rng.in_disk(q, r);
        if (!(x.y > patch.h.value(x.x)) || !(norm(x) < 2.0 * patch.kappa)) return false;
    }
    return true;
}

InnerBallBattery inner_ball_battery(int cases, std::uint64_t seed, int samples) {
    require(cases >= 1, "battery needs at least one case");
    InnerBallBattery out;
    Rng rng(seed);
    for (int c = 0; c < cases; ++c) {
        const int pieces = 1 + static_cast<int>(rng.index(6));
        std::vector<double> knots{-3.0};
        for (int i = 1; i < pieces; ++i) knots.push_back(rng.uniform(-2.0, 2.0));
        knots.push_back(3.0);
        std::sort(knots.begin(), knots.end());
        std::vector<double> c2(pieces);
        for (double& v : c2) v = rng.uniform(-2.0, 2.0);
        const double slope0 = rng.uniform(-1.5, 1.5);
        const QuadraticSpline raw(knots, 0.0, slope0, c2);
        GraphPatch patch{QuadraticSpline(knots, -raw.value(0.0), slope0, c2)};
        patch.K = std::max(patch.h.slope_lipschitz(), 1e-12);
        patch.kappa = rng.uniform(0.2, 1.0);
        Vec2 p{};
        do {
            const double x = rng.uniform(-patch.kappa, patch.kappa);
            p = {x, patch.h.value(x)};
        } while (!(norm(p) < patch.kappa));
        const InnerBall b = inner_sphere_center(patch, p, patch.kappa, patch.K);
        ++out.cases;
        if (!verify_inner_ball(patch, b.q, b.r, samples, rng.raw())) ++out.violations;
    }
    return out;
}

double boundary_length_in_annulus(const Domain& dom, Vec2 P, double r_in, double r_out) {
    const auto& els = dom.boundary();
    require(!els.empty(), "domain has no closed boundary parametrization");
    auto inside = [&](const BoundaryElement& e, double t) {
        const double g = norm(e.point(t) - P);
        return g >= r_in && g <= r_out;
    };
    double total = 0.0;
    const int n = 4096;
    for (const auto& e : els) {
        double acc = 0.0;
        bool prev = inside(e, 0.0);
        for (int k = 0; k < n; ++k) {
            const double a = static_cast<double>(k) / n, b = static_cast<double>(k + 1) / n;
            const bool cur = inside(e, b);
            if (prev && cur) {
                acc += b - a;
            } else if (prev != cur) {
                double lo = a, hi = b;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (inside(e, mid) == prev ? lo : hi) = mid;
                }
                acc += prev ? lo - a : b - hi;
            }
            prev = cur;
        }
        total += acc * e.length();
    }
    return total;
}

double annulus_boundary_area(const Domain& dom, double R) {
    require(R > 0.0, "annulus radius must be positive");
    return boundary_length_in_annulus(dom, {0.0, 0.0}, R, 8.0 * R);
}

BandMeasure band_measure(const Domain& dom, Vec2 P, double R1, double R2, double mu, long samples,
                         std::uint64_t seed) {
    require(R1 < R2, "band measure needs R1 < R2");
    require(mu > 0.0 && R2 - R1 > 2.0 * mu, "band measure needs R2 - R1 > 2 mu > 0");
    require(samples >= 10000, "band measure needs at least 1e4 samples");
    BandMeasure out;
    const Box b = dom.bbox();
    require(b.bounded(), "band measure needs a bounded domain");
    const Box s{{std::max(b.lo.x, P.x - R2), std::max(b.lo.y, P.y - R2)},
                {std::min(b.hi.x, P.x + R2), std::min(b.hi.y, P.y + R2)}};
    out.boundary_area = boundary_length_in_annulus(dom, P, std::max(R1 - mu, 0.0), R2 + mu);
    if (!(s.hi.x > s.lo.x) || !(s.hi.y > s.lo.y)) return out;
    const double area = (s.hi.x - s.lo.x) * (s.hi.y - s.lo.y);
    Rng rng(seed);
    long hits = 0;
    for (long i = 0; i < samples; ++i) {
        const Vec2 x{rng.uniform(s.lo.x, s.hi.x), rng.uniform(s.lo.y, s.hi.y)};
        const double rr = norm(x - P);
        if (rr < R1 || rr > R2) continue;
        if (!dom.contains(x)) continue;
        if (dom.distance(x) <= mu) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    out.band_volume = area * p;
    out.std_error = area * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    return out;
}

double patch_constant(double K) { return K > 0.0 ? std::min(0.1, 1.0 / (4.0 * K)) : 0.1; }

double level_set_lipschitz_probe(const GraphPatch& patch, double t, int probes) {
    const double ks = patch_constant(patch.K);
    require(t > 0.0 && t <= ks, "level t must lie in (0, kappa*]");
    require(probes >= 100, "level set probe needs at least 100 abscissae");
    const Domain dom = Domain::graph(patch);
    std::vector<double> xs(probes), ys(probes);
    for (int i = 0; i < probes; ++i) {
        const double x = -ks + 2.0 * ks * i / (probes - 1);
        const double base = patch.h.value(x);
        double slope = 0.0;
        for (int k = -8; k <= 8; ++k) slope = std::max(slope, std::abs(patch.h.slope(x + 0.25 * t * k)));
        double hi = base + 2.0 * t * std::sqrt(1.0 + slope * slope);
        int grow = 0;
        while (dom.distance({x, hi}) < t) {
            hi = base + 2.0 * (hi - base);
            if (++grow > 20) throw NumericalError("level set bisection failed to bracket at x' = " + std::to_string(x));
        }
        double lo = base;
        for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            (dom.distance({x, mid}) < t ? lo : hi) = mid;
        }
        const Vec2 pt{x, 0.5 * (lo + hi)};
        if (!(norm(pt) < 2.0 * patch.kappa))
            throw NumericalError("level set leaves the patch ball B_{2 kappa}");
        xs[i] = pt.x;
        ys[i] = pt.y;
    }
    double m = 0.0;
    for (int i = 0; i + 1 < probes; ++i) m = std::max(m, std::abs(ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));
    return m;
}

std::vector<Vec2> boundary_polyline(const Domain& dom, std::size_t vertices) {
    require(vertices >= 8, "polyline needs at least 8 vertices");
    std::vector<Vec2> out;
    const auto& els = dom.boundary();
    if (!els.empty()) {
        double total = 0.0;
        for (const auto& e : els) total += e.length();
        for (const auto& e : els) {
            const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(vertices * e.length() / total)));
            for (std::size_t k = 0; k < n; ++k) out.push_back(e.point(static_cast<double>(k) / n));
        }
        return out;
    }
    if (const GraphPatch* p = dom.patch()) {
        for (std::size_t k = 0; k < vertices; ++k) {
            const double x = p->box.lo.x + (p->box.hi.x - p->box.lo.x) * k / (vertices - 1);
            out.push_back({x, p->h.value(x)});
        }
        return out;
    }
    if (dom.kind() == DomainKind::cusp) {
        // trace the upper boundary over |x1| <= 6 R, then mirror it
        const double R = dom.distance({0.0, 0.0});
        const std::size_t half = vertices / 2;
        std::vector<Vec2> upper;
        for (std::size_t k = 0; k < half; ++k) {
            const double x = -6.0 * R + 12.0 * R * k / (half - 1);
            upper.push_back({x, std::max(R * std::exp(-std::abs(x) / R), std::sqrt(std::max(0.0, R * R - x * x)))});
        }
        out = upper;
        for (auto it = upper.rbegin(); it != upper.rend(); ++it) out.push_back({it->x, -it->y});
        return out;
    }
    throw PreconditionError("domain has no boundary parametrization");
}

namespace {

std::vector<double> numbers(const std::string& s) {
    std::vector<double> v;
    static const std::regex num(R"([-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?)");
    for (auto it = std::sregex_iterator(s.begin(), s.end(), num); it != std::sregex_iterator(); ++it)
        v.push_back(std::stod(it->str()));
    return v;
}

}  // namespace

Domain parse_domain(const std::string& text) {
    static const std::regex call(R"(^\s*([a-z_]+)\s*\((.*)\)\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, call)) throw PreconditionError("malformed domain literal '" + text + "'");
    const std::string name = m[1].str();
    const std::string args = m[2].str();
    static const std::regex list(R"(^\s*([-+.\deE]+\s*(,\s*[-+.\deE]+\s*)*)?$)");
    if (name == "polygon") {
        static const std::regex tuple(R"(\(\s*([-+.\deE]+)\s*,\s*([-+.\deE]+)\s*\))");
        static const std::regex shape(R"(^\s*\([^()]*\)(\s*,\s*\([^()]*\))*\s*$)");
        if (!std::regex_match(args, shape)) throw PreconditionError("malformed polygon vertex list");
        std::vector<Vec2> v;
        for (auto it = std::sregex_iterator(args.begin(), args.end(), tuple); it != std::sregex_iterator(); ++it) {
            const auto nums = numbers(it->str());
            require(nums.size() == 2, "polygon vertices need two coordinates");
            v.push_back({nums[0], nums[1]});
        }
        return Domain::polygon(v);
    }
    if (!std::regex_match(args, list)) throw PreconditionError("malformed arguments in domain literal '" + text + "'");
    const auto a = numbers(args);
    if (name == "ball") {
        require(a.size() == 3, "ball(cx, cy, r) needs three numbers");
        return Domain::ball({a[0], a[1]}, a[2]);
    }
    if (name == "counterexample") {
        require(a.size() <= 1, "counterexample(eps_geom) takes at most one number");
        return Domain::counterexample(a.empty() ? 0.05 : a[0]);
    }
    if (name == "cusp") {
        require(a.size() == 1, "cusp(R) needs one number");
        return Domain::cusp(a[0]);
    }
    if (name == "stadium") {
        require(a.size() == 4, "stadium(x0, x1, yc, r) needs four numbers");
        return Domain::stadium(a[0], a[1], a[2], a[3]);
    }
    throw PreconditionError("unknown domain kind '" + name + "'");
}

double band_battery_ratio(long samples, std::uint64_t seed) {
    struct Case {
        Domain dom;
        Vec2 P;
        double R1, R2;
    };
    const auto square = Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const auto ce = Domain::counterexample();
    const std::vector<Case> cases = {
        {Domain::ball({0, 0}, 3.0), {0, 0}, 1.0, 5.0},
        {Domain::ball({0, 0}, 3.0), {2.5, 0}, 0.2, 1.0},
        {square, {0.5, 0.5}, 0.1, 10.0},
        {square, {1.0, 1.0}, 0.05, 0.5},
        {Domain::stadium(-1.0, 1.0, 0.0, 1.0), {1.5, 0.5}, 0.2, 1.0},
        {ce, {-7.0, 0.0}, 0.25, 1.5},
        {ce, {0.0, 0.0}, 1.0, 6.0},
        {ce, {-6.0, 0.0}, 0.1, 0.8},
    };
    double worst = 0.0;
    for (const auto& c : cases)
        for (double mu : {0.02, 0.05, 0.1}) {
            const auto m = band_measure(c.dom, c.P, c.R1, c.R2, mu, samples, seed);
            if (m.boundary_area > 0.0) worst = std::max(worst, m.band_volume / (mu * m.boundary_area));
        }
    return worst;
}

}  // namespace afrac
