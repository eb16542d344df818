#include "afrac/holder.hpp"

#include <algorithm>
#include <cmath>

#include "afrac/error.hpp"
#include "afrac/rng.hpp"

namespace afrac {

namespace {

using Deriv = std::array<double, 4>;

struct NodeSet {
    std::vector<int> gi, gj;
    std::vector<Vec2> pos;
    std::vector<Deriv> dk;   // D^k u, k-th derivative components (unused slots zero)
    std::vector<std::array<double, 3>> dnorm;  // |D^j u|, j = 0..2
    std::vector<double> dist;
};

int components(int k) { return k == 0 ? 1 : (k == 1 ? 2 : 4); }

// Centred differences of order up to k at node (i, j); returns false if the stencil leaves `ok`.
template <class Ok>
bool derivatives(const GridFunction& u, int i, int j, int k, const Ok& ok, Deriv* dk, std::array<double, 3>* dn) {
    const int reach = k == 0 ? 0 : 1;
    for (int b = -reach; b <= reach; ++b)
        for (int a = -reach; a <= reach; ++a) {
            if (k == 1 && a != 0 && b != 0) continue;
            const int ii = i + a, jj = j + b;
            if (ii < 0 || jj < 0 || ii >= u.nx() || jj >= u.ny() || !ok(ii, jj)) return false;
        }
    const double h = u.h();
    auto v = [&](int a, int b) { return u.at(i + a, j + b); };
    *dk = {0.0, 0.0, 0.0, 0.0};
    (*dn)[0] = std::abs(v(0, 0));
    (*dn)[1] = (*dn)[2] = 0.0;
    if (k == 0) {
        (*dk)[0] = v(0, 0);
        return true;
    }
    const double ux = (v(1, 0) - v(-1, 0)) / (2 * h), uy = (v(0, 1) - v(0, -1)) / (2 * h);
    (*dn)[1] = std::hypot(ux, uy);
    if (k == 1) {
        *dk = {ux, uy, 0.0, 0.0};
        return true;
    }
    const double uxx = (v(1, 0) - 2 * v(0, 0) + v(-1, 0)) / (h * h);
    const double uyy = (v(0, 1) - 2 * v(0, 0) + v(0, -1)) / (h * h);
    const double uxy = (v(1, 1) - v(1, -1) - v(-1, 1) + v(-1, -1)) / (4 * h * h);
    *dk = {uxx, uxy, uxy, uyy};
    (*dn)[2] = std::sqrt(uxx * uxx + 2 * uxy * uxy + uyy * uyy);
    return true;
}

template <class Ok>
NodeSet collect(const GridFunction& u, int k, const Ok& ok, const Domain* dom) {
    NodeSet ns;
    for (int j = 0; j < u.ny(); ++j)
        for (int i = 0; i < u.nx(); ++i) {
            if (!ok(i, j)) continue;
            Deriv dk;
            std::array<double, 3> dn;
            if (!derivatives(u, i, j, k, ok, &dk, &dn)) continue;
            ns.gi.push_back(i);
            ns.gj.push_back(j);
            ns.pos.push_back(u.node(i, j));
            ns.dk.push_back(dk);
            ns.dnorm.push_back(dn);
            if (dom) ns.dist.push_back(dom->distance(u.node(i, j)));
        }
    return ns;
}

// Calls f(a, b) for the sampled pairs a != b.
template <class F>
void for_each_pair(const NodeSet& ns, const GridFunction& u, const PairSampling& ps, const F& f) {
    const std::size_t n = ns.pos.size();
    const double min_sep = ps.min_separation_steps * u.h();
    auto visit = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        if (norm(ns.pos[a] - ns.pos[b]) < min_sep) return;
        f(a, b);
    };
    if (n <= ps.all_pairs_limit) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) visit(a, b);
        return;
    }
    std::vector<std::int64_t> lookup(u.size(), -1);
    for (std::size_t a = 0; a < n; ++a) lookup[u.index(ns.gi[a], ns.gj[a])] = static_cast<std::int64_t>(a);
    const int r = ps.local_radius;
    for (std::size_t a = 0; a < n; ++a)
        for (int db = -r; db <= r; ++db)
            for (int da = -r; da <= r; ++da) {
                const int i = ns.gi[a] + da, j = ns.gj[a] + db;
                if (i < 0 || j < 0 || i >= u.nx() || j >= u.ny()) continue;
                const std::int64_t b = lookup[u.index(i, j)];
                if (b > static_cast<std::int64_t>(a)) visit(a, static_cast<std::size_t>(b));
            }
    const int stride = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n) / ps.coarse_nodes)));
    std::vector<std::size_t> coarse;
    for (std::size_t a = 0; a < n; ++a)
        if (ns.gi[a] % stride == 0 && ns.gj[a] % stride == 0) coarse.push_back(a);
    for (std::size_t x = 0; x < coarse.size(); ++x)
        for (std::size_t y = x + 1; y < coarse.size(); ++y) visit(coarse[x], coarse[y]);
    Rng rng(ps.seed);
    for (std::size_t t = 0; t < ps.random_pairs; ++t) visit(rng.index(n), rng.index(n));
}

double diff_norm(const Deriv& a, const Deriv& b, int k) {
    double acc = 0.0;
    for (int c = 0; c < components(k); ++c) acc += (a[c] - b[c]) * (a[c] - b[c]);
    return std::sqrt(acc);
}

struct FitLine {
    double slope, r2;
};

FitLine fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= n, my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    const double ss_res = syy - slope * sxy;
    return {slope, syy > 0.0 ? 1.0 - std::max(0.0, ss_res) / syy : 1.0};
}

}  // namespace

AlphaSplit split_alpha(double alpha) {
    require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
    AlphaSplit out;
    out.k = static_cast<int>(std::ceil(alpha)) - 1;
    out.alpha_prime = alpha - out.k;
    return out;
}

double holder_norm(const GridFunction& u, double beta, const Region& region, const PairSampling& ps) {
    const AlphaSplit sp = split_alpha(beta);
    require(sp.k <= 2, "derivative order above 2 is not supported");
    std::vector<std::uint8_t> in(u.size(), 0);
    for (int j = 0; j < u.ny(); ++j)
        for (int i = 0; i < u.nx(); ++i) in[u.index(i, j)] = u.interior(i, j) && region(u.node(i, j));
    const NodeSet ns = collect(u, sp.k, [&](int i, int j) { return in[u.index(i, j)] != 0; }, nullptr);
    require(ns.pos.size() >= 10, "region contains fewer than 10 usable nodes");
    double total = 0.0;
    for (int j = 0; j <= sp.k; ++j) {
        double m = 0.0;
        for (const auto& d : ns.dnorm) m = std::max(m, d[j]);
        total += m;
    }
    double semi = 0.0;
    for_each_pair(ns, u, ps, [&](std::size_t a, std::size_t b) {
        semi = std::max(semi, diff_norm(ns.dk[a], ns.dk[b], sp.k) / std::pow(norm(ns.pos[a] - ns.pos[b]), sp.alpha_prime));
    });
    return total + semi;
}

WeightedNormResult weighted_norm(const GridFunction& u, const Domain& dom, double alpha, double sigma,
                                 const PairSampling& ps) {
    require(sigma >= -2.0 && sigma <= 2.0, "sigma must lie in [-2, 2]");
    const AlphaSplit sp = split_alpha(alpha);
    require(sp.k <= 2, "derivative order above 2 is not supported");
    const double h = u.h();
    std::vector<std::uint8_t> adm(u.size(), 0), in(u.size(), 0);
    for (int j = 0; j < u.ny(); ++j)
        for (int i = 0; i < u.nx(); ++i) {
            const std::size_t k = u.index(i, j);
            in[k] = u.interior(k);
            adm[k] = in[k] && dom.distance(u.node(i, j)) >= 4.0 * h;
        }
    // the centre must be admissible; the stencil only has to stay in the domain
    NodeSet ns;
    {
        NodeSet all = collect(u, sp.k, [&](int i, int j) { return in[u.index(i, j)] != 0; }, &dom);
        for (std::size_t a = 0; a < all.pos.size(); ++a) {
            if (!adm[u.index(all.gi[a], all.gj[a])]) continue;
            ns.gi.push_back(all.gi[a]);
            ns.gj.push_back(all.gj[a]);
            ns.pos.push_back(all.pos[a]);
            ns.dk.push_back(all.dk[a]);
            ns.dnorm.push_back(all.dnorm[a]);
            ns.dist.push_back(all.dist[a]);
        }
    }
    require(!ns.pos.empty(), "no admissible node at this resolution");
    WeightedNormResult out;
    out.alpha = alpha;
    out.sigma = sigma;
    out.k = sp.k;
    out.alpha_prime = sp.alpha_prime;
    out.nodes = ns.pos.size();
    out.sup_terms.assign(sp.k + 1, 0.0);
    for (std::size_t a = 0; a < ns.pos.size(); ++a)
        for (int j = 0; j <= sp.k; ++j)
            out.sup_terms[j] = std::max(out.sup_terms[j], std::pow(ns.dist[a], j + sigma) * ns.dnorm[a][j]);
    for_each_pair(ns, u, ps, [&](std::size_t a, std::size_t b) {
        const double dxy = std::min(ns.dist[a], ns.dist[b]);
        const double q = std::pow(dxy, alpha + sigma) * diff_norm(ns.dk[a], ns.dk[b], sp.k) /
                         std::pow(norm(ns.pos[a] - ns.pos[b]), sp.alpha_prime);
        out.seminorm = std::max(out.seminorm, q);
    });
    out.total = out.seminorm;
    for (double v : out.sup_terms) out.total += v;
    return out;
}

NormRatio norm_monotonicity_check(const GridFunction& u, const Domain& dom, double alpha1, double alpha2,
                                  double sigma, const PairSampling& ps) {
    require(alpha1 <= alpha2, "need alpha1 <= alpha2");
    NormRatio out;
    out.norm1 = weighted_norm(u, dom, alpha1, sigma, ps).total;
    out.norm2 = alpha1 == alpha2 ? out.norm1 : weighted_norm(u, dom, alpha2, sigma, ps).total;
    if (out.norm2 == 0.0) {
        if (out.norm1 != 0.0) throw NumericalError("weaker norm positive while the stronger one vanishes");
        out.both_zero = true;
        return out;
    }
    out.ratio = out.norm1 / out.norm2;
    return out;
}

std::vector<std::function<double(Vec2)>> smooth_family(int count, std::uint64_t seed) {
    require(count >= 1, "family needs at least one member");
    Rng rng(seed);
    std::vector<std::function<double(Vec2)>> out;
    for (int i = 0; i < count; ++i) {
        struct Term {
            double a, kx, ky, phase;
        };
        std::vector<Term> terms;
        const int n = 1 + static_cast<int>(rng.index(4));
        for (int t = 0; t < n; ++t)
            terms.push_back({rng.uniform(-1.0, 1.0), rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0),
                             rng.uniform(0.0, 2.0 * M_PI)});
        const double c = rng.uniform(-0.5, 0.5);
        out.push_back([terms, c](Vec2 x) {
            double v = c;
            for (const auto& t : terms) v += t.a * std::sin(t.kx * x.x + t.ky * x.y + t.phase);
            return v;
        });
    }
    return out;
}

FamilyRatio norm_family_ratio(const Domain& dom, double h, double alpha1, double alpha2, double sigma, int count,
                              const PairSampling& ps) {
    FamilyRatio out;
    for (const auto& f : smooth_family(count)) {
        const auto u = GridFunction::sample(dom, h, f);
        const double r = norm_monotonicity_check(u, dom, alpha1, alpha2, sigma, ps).ratio;
        out.ratios.push_back(r);
        out.max_ratio = std::max(out.max_ratio, r);
    }
    return out;
}

ExponentFit local_exponent_fit(const std::function<double(Vec2)>& u, Vec2 x0, Vec2 direction,
                               const std::vector<double>& scales, int order) {
    require(order == 1 || order == 2, "order must be 1 or 2");
    require(scales.size() >= 5, "need at least 5 scales");
    const auto [lo, hi] = std::minmax_element(scales.begin(), scales.end());
    require(*lo > 0.0 && *hi >= 8.0 * *lo * (1.0 - 1e-12), "scales must span at least 3 octaves");
    const Vec2 e = (1.0 / norm(direction)) * direction;
    ExponentFit out;
    std::vector<double> lx, ly;
    const double u0 = u(x0);
    for (double t : scales) {
        const double d = order == 1 ? std::abs(u0 - u(x0 + t * e)) : std::abs(u(x0 + t * e) - 2.0 * u0 + u(x0 - t * e));
        if (!(d >= 1e-14)) throw NumericalError("difference below 1e-14: exponent undefined for a flat function");
        out.scales.push_back(t);
        out.diffs.push_back(d);
        lx.push_back(std::log(t));
        ly.push_back(std::log(d));
    }
    const FitLine f = fit_line(lx, ly);
    out.gamma = f.slope;
    out.r2 = f.r2;
    return out;
}

ExponentFit local_exponent_fit(const GridFunction& u, Vec2 x0, Vec2 direction, const std::vector<double>& scales,
                               int order) {
    const Vec2 e = (1.0 / norm(direction)) * direction;
    for (double t : scales) {
        require(t >= 4.0 * u.h() * (1.0 - 1e-12), "scales must be at least 4h");
        require(u.domain().contains(x0 + t * e) && u.domain().contains(x0),
                "probe point outside the domain");
        if (order == 2) require(u.domain().contains(x0 - t * e), "probe point outside the domain");
    }
    return local_exponent_fit([&](Vec2 x) { return u.interpolate_cubic(x); }, x0, direction, scales, order);
}

std::vector<double> geometric_scales(double t0, double t1, int steps_per_octave) {
    require(t0 > 0.0 && t1 >= t0 && steps_per_octave >= 1, "invalid scale range");
    std::vector<double> out;
    for (int k = 0;; ++k) {
        const double t = t0 * std::exp2(static_cast<double>(k) / steps_per_octave);
        if (t > t1 * (1.0 + 1e-12)) break;
        out.push_back(t);
    }
    return out;
}

}  // namespace afrac
