#include "afrac/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "afrac/error.hpp"
#include "afrac/quadrature.hpp"
#include "afrac/rng.hpp"

namespace afrac {

namespace {

constexpr double kGapX = 0.0;
constexpr double kGapY = -0.05;
constexpr double kBoundaryProbeX = -7.0;
constexpr double kKernelCut = 0.5;

double linear_piece(double a, double b, double fa, double fb, double s) {
    // a, b > 0
    const double m0 = quad::power_kernel_integral(a, b, s);
    const double m1 = quad::moment0(a, b, s);
    const double slope = (fb - fa) / (b - a);
    return (fa - slope * a) * m0 + slope * m1;
}

int column_of(const GridFunction& u, double x) {
    const double f = (x - u.origin().x) / u.h();
    const long i = std::lround(f);
    require(std::abs(f - i) < 1e-9 && i >= 0 && i < u.nx(), "abscissa is not a grid column");
    return static_cast<int>(i);
}

// (1 - theta) u along the row y, evaluated at every column
std::vector<double> row_values(const GridFunction& u, double y, double s, const CounterexampleOptions& opt,
                               std::vector<double>* xs) {
    std::vector<double> vs(u.nx());
    xs->resize(u.nx());
    for (int i = 0; i < u.nx(); ++i) {
        const Vec2 p{u.origin().x + u.h() * i, y};
        (*xs)[i] = p.x;
        const double theta = cutoff_theta(p, opt.cutoff_r0, opt.cutoff_r1);
        vs[i] = theta >= 1.0 ? 0.0 : (1.0 - theta) * u.interpolate_boundary_weighted(i, y, s);
    }
    return vs;
}

}  // namespace

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

double cutoff_theta(Vec2 x, double r0, double r1) {
    require(r1 > r0 && r0 > 0.0, "cutoff needs 0 < r0 < r1");
    return 1.0 - smooth_step((norm(x) - r0) / (r1 - r0));
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size() && x.size() >= 2, "fit needs at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        require(x[i] > 0.0 && y[i] > 0.0, "log-log fit needs positive data");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
        mx += lx.back();
        my += ly.back();
    }
    mx /= n, my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.r2 = syy > 0.0 ? 1.0 - std::max(0.0, syy - f.slope * sxy) / syy : 1.0;
    return f;
}

double line_kernel_integral(const std::vector<double>& xs, const std::vector<double>& vs, double s, double cut) {
    require(xs.size() == vs.size(), "abscissae and values differ in length");
    require(cut > 0.0, "kernel cut must be positive");
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        double a = xs[k], b = xs[k + 1], fa = vs[k], fb = vs[k + 1];
        if (fa == 0.0 && fb == 0.0) continue;
        require(b > a, "abscissae must increase");
        auto value_at = [&](double x) { return fa + (fb - fa) * (x - xs[k]) / (xs[k + 1] - xs[k]); };
        // positive part [max(a, cut), b]
        if (b > cut) {
            const double lo = std::max(a, cut);
            acc += linear_piece(lo, b, value_at(lo), fb, s);
        }
        // negative part mirrored: [max(-b, cut), -a]
        if (a < -cut) {
            const double hi = std::min(b, -cut);
            acc += linear_piece(-hi, -a, value_at(hi), fa, s);
        }
    }
    return acc;
}

double j1_integral(const GridFunction& u, double s, double eta, const CounterexampleOptions& opt) {
    require(eta > 0.0, "eta must be positive");
    std::vector<double> xs;
    const std::vector<double> below = row_values(u, -eta, s, opt, &xs);
    const std::vector<double> level = row_values(u, 0.0, s, opt, &xs);
    return 2.0 * (line_kernel_integral(xs, below, s, kKernelCut) - line_kernel_integral(xs, level, s, kKernelCut));
}

double j2_integral(const GridFunction& u, double s, double eta, const CounterexampleOptions& opt) {
    require(eta > 0.0, "eta must be positive");
    require(opt.cutoff_r0 - eta >= kKernelCut, "shift too large for the cutoff");
    const int i = column_of(u, 0.0);
    std::vector<double> ys(u.ny()), ws(u.ny()), shifted(u.ny());
    for (int j = 0; j < u.ny(); ++j) {
        const Vec2 p = u.node(i, j);
        ys[j] = p.y;
        ws[j] = (1.0 - cutoff_theta(p, opt.cutoff_r0, opt.cutoff_r1)) * u.at(i, j);
        shifted[j] = ys[j] + eta;
    }
    // w vanishes on |rho| < r0, so moving the shift onto the kernel leaves the cut inactive:
    // int w(rho - eta) K(rho) = int w(sigma) K(sigma + eta)
    return 2.0 * (line_kernel_integral(shifted, ws, s, kKernelCut) - line_kernel_integral(ys, ws, s, kKernelCut));
}

CounterexampleExperiment counterexample_tables(const GridFunction& u, double s, const std::vector<double>& eta_list,
                                               const CounterexampleOptions& opt) {
    require(eta_list.size() >= 2, "need at least two eta values");
    CounterexampleExperiment out;
    const int ib = column_of(u, kBoundaryProbeX);
    std::vector<double> etas, j1, j2, ub;
    for (double eta : eta_list) {
        require(eta > 0.0 && eta <= 0.25, "eta must lie in (0, 1/4]");
        require(eta >= u.h() / 4.0, "eta below h/4 is not resolved");
        CounterexampleRow row;
        row.eta = eta;
        row.j1 = j1_integral(u, s, eta, opt);
        row.j2 = j2_integral(u, s, eta, opt);
        row.u_boundary = u.interpolate_boundary_weighted(ib, -eta, s);
        out.rows.push_back(row);
        etas.push_back(eta);
        j1.push_back(row.j1);
        j2.push_back(std::abs(row.j2));
        ub.push_back(row.u_boundary);
    }
    auto safe_fit = [&](const std::vector<double>& y) {
        for (double v : y)
            if (!(v > 0.0)) return LineFit{NAN, 0.0};
        return fit_loglog(etas, y);
    };
    out.gamma1 = safe_fit(j1);
    out.gamma2 = safe_fit(j2);
    out.gamma_boundary = safe_fit(ub);
    return out;
}

CounterexampleExperiment counterexample_experiment(double s, const std::vector<double>& eta_list, double h,
                                                   const CounterexampleOptions& opt) {
    const Domain dom = Domain::counterexample(opt.eps_geom);
    SolveOptions so;
    so.threads = opt.threads;
    const Solution sol = solve_problem(dom, s, [](Vec2) { return 1.0; }, h, so);
    CounterexampleExperiment out = counterexample_tables(sol.u, s, eta_list, opt);
    out.solve = {sol.domain, s, h, sol.stats};
    return out;
}

ConvexExperiment convex_regularity_experiment(double s, const std::vector<double>& h_list, int probe_count,
                                              double g_value, int threads) {
    require(s > 0.0 && s < 1.0, "s must lie in (0,1)");
    require(!h_list.empty() && probe_count >= 1, "need resolutions and probes");
    const Domain dom = Domain::ball({0.0, 0.0}, 1.0);
    const double h_max = *std::max_element(h_list.begin(), h_list.end());
    const std::vector<double> scales = geometric_scales(4.0 * h_max, 32.0 * h_max, 2);
    // probes: rings of radius <= 0.5, alternating axis and diagonal directions
    std::vector<std::pair<Vec2, Vec2>> probes;
    for (int p = 0; p < probe_count; ++p) {
        const double r = 0.5 * static_cast<double>(p % 5) / 4.0;
        const double phi = 2.0 * std::numbers::pi * p / probe_count;
        const Vec2 x0{r * std::cos(phi), r * std::sin(phi)};
        const double dir_angle = (p % 4) * std::numbers::pi / 4.0;
        probes.push_back({x0, unit(dir_angle)});
    }
    require(32.0 * h_max <= (1.0 - 0.5) / 4.0 + 1e-12, "h too coarse for a 3-octave window inside d/4");
    ConvexExperiment out;
    const double beta = 1.0 + s - 0.05;
    for (double h : h_list) {
        SolveOptions so;
        so.threads = threads;
        const Solution sol = solve_problem(dom, s, [g_value](Vec2) { return g_value; }, h, so);
        out.report.solves.push_back({sol.domain, s, h, sol.stats});
        double gmin = INFINITY;
        for (const auto& [x0, dir] : probes) {
            // snap to the grid so axis probes hit nodes
            const Vec2 xs{std::round(x0.x / h) * h, std::round(x0.y / h) * h};
            const ExponentFit f = local_exponent_fit(sol.u, xs, dir, scales, 2);
            ProbeRecord rec{xs, dir, 2, h, f.gamma, f.r2, scales.front(), scales.back(), f.r2 >= kMinR2};
            out.report.records.push_back(rec);
            if (rec.reliable) gmin = std::min(gmin, f.gamma);
        }
        // weighted estimate ratio ||u||^{(-s)}_{beta+2s} / (||g||^{(s)}_beta + ||u||_{C^s})
        const GridFunction g = GridFunction::sample(dom, h, [g_value](Vec2) { return g_value; });
        const double lhs = weighted_norm(sol.u, dom, beta + 2.0 * s, -s).total;
        const double gnorm = weighted_norm(g, dom, beta, s).total;
        const double cs = holder_norm(sol.u, s, [](Vec2) { return true; });
        out.h.push_back(h);
        out.min_gamma.push_back(gmin);
        out.estimate_ratio.push_back(lhs / (gnorm + cs));
    }
    double gmin = INFINITY;
    for (const auto& r : out.report.records)
        if (r.reliable) {
            gmin = std::min(gmin, r.gamma);
            ++out.report.reliable;
        }
    out.report.min_gamma = gmin;
    return out;
}

GapProbe regularity_gap_probe(double s, const std::vector<double>& h_list, int threads, bool ball_twice) {
    require(!h_list.empty(), "need at least one resolution");
    const double h_max = *std::max_element(h_list.begin(), h_list.end());
    const std::vector<double> scales = geometric_scales(4.0 * h_max, 32.0 * h_max, 2);
    const Domain convex = Domain::ball({0.0, 0.0}, 4.0);
    const Domain other = ball_twice ? convex : Domain::counterexample();
    const Vec2 x0{kGapX, kGapY};
    GapProbe out;
    std::vector<double> hs = h_list;
    std::sort(hs.begin(), hs.end(), std::greater<>());
    for (double h : hs) {
        SolveOptions so;
        so.threads = threads;
        for (int which = 0; which < 2; ++which) {
            const Domain& dom = which == 0 ? convex : other;
            const Solution sol = solve_problem(dom, s, [](Vec2) { return 1.0; }, h, so);
            const ExponentFit f = local_exponent_fit(sol.u, x0, {0.0, 1.0}, scales, 2);
            ProbeRecord rec{x0, {0.0, 1.0}, 2, h, f.gamma, f.r2, scales.front(), scales.back(), f.r2 >= kMinR2};
            (which == 0 ? out.convex : out.nonconvex).push_back(rec);
        }
        out.h.push_back(h);
    }
    out.gamma_convex = out.convex.back().gamma;
    out.gamma_nonconvex = out.nonconvex.back().gamma;
    return out;
}

std::string counterexample_svg(const CounterexampleExperiment& e) {
    const double W = 640, H = 420, m = 60;
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    auto upd = [&](double x, double y) {
        if (!(x > 0.0 && y > 0.0)) return;
        xmin = std::min(xmin, std::log10(x)), xmax = std::max(xmax, std::log10(x));
        ymin = std::min(ymin, std::log10(y)), ymax = std::max(ymax, std::log10(y));
    };
    for (const auto& r : e.rows) {
        upd(r.eta, r.j1);
        upd(r.eta, std::abs(r.j2));
        upd(r.eta, r.u_boundary);
    }
    if (!(xmax > xmin)) xmax = xmin + 1;
    if (!(ymax > ymin)) ymax = ymin + 1;
    auto px = [&](double x) { return m + (std::log10(x) - xmin) / (xmax - xmin) * (W - 2 * m); };
    auto py = [&](double y) { return H - m - (std::log10(y) - ymin) / (ymax - ymin) * (H - 2 * m); };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<line x1=\"" << m << "\" y1=\"" << H - m << "\" x2=\"" << W - m << "\" y2=\"" << H - m
      << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << H - m << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">log10 eta</text>\n";
    struct Series {
        const char* name;
        const char* color;
        int which;
    };
    const Series series[] = {{"J1", "#1f77b4", 0}, {"|J2|", "#d62728", 1}, {"u(-7,-eta)", "#2ca02c", 2}};
    int legend = 0;
    for (const auto& sr : series) {
        o << "<polyline fill=\"none\" stroke=\"" << sr.color << "\" points=\"";
        for (const auto& r : e.rows) {
            const double y = sr.which == 0 ? r.j1 : (sr.which == 1 ? std::abs(r.j2) : r.u_boundary);
            if (y > 0.0) o << px(r.eta) << "," << py(y) << " ";
        }
        o << "\"/>\n";
        o << "<text x=\"" << W - m - 110 << "\" y=\"" << m + 18 * legend++ << "\" fill=\"" << sr.color << "\">"
          << sr.name << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

BarrierStats barrier_constancy(double s, int points, std::uint64_t seed, int threads) {
    require(points >= 2, "need at least two points");
    BarrierStats out;
    Rng rng(seed);
    while (static_cast<int>(out.points.size()) < points) {
        const Vec2 x = rng.in_disk({0.0, 0.0}, 0.9);
        out.points.push_back(x);
    }
    out.values.resize(points);
    const auto u = barrier_function(s);
    const auto a = SpectralMeasure::coordinate_axes(2);
    parallel_for(points, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) out.values[k] = apply_L_point(u, out.points[k], a, s);
    });
    double sum = 0.0;
    for (double v : out.values) sum += v;
    out.mean = sum / points;
    double var = 0.0;
    for (double v : out.values) {
        var += (v - out.mean) * (v - out.mean);
        out.max_rel_dev = std::max(out.max_rel_dev, std::abs(v - out.mean) / std::abs(out.mean));
    }
    out.rel_std = std::sqrt(var / (points - 1)) / std::abs(out.mean);
    return out;
}

std::vector<MaxPrincipleCase> maximum_principle_battery(int threads) {
    struct Setup {
        std::string domain;
        double h;
        std::vector<std::string> gs;
    };
    const std::vector<Setup> setups = {
        {"ball(0,0,1)", 1.0 / 32, {"const:1", "bump", "halfplane", "ring"}},
        {"polygon((0,0),(2,0),(1.5,1),(0.3,1.4))", 1.0 / 32, {"const:1", "bump", "halfplane"}},
        {"counterexample(0.05)", 1.0 / 8, {"const:1", "bump", "halfplane"}},
    };
    auto g_of = [](const std::string& name) -> std::function<double(Vec2)> {
        if (name == "const:1") return [](Vec2) { return 1.0; };
        if (name == "bump") return [](Vec2 x) { return std::exp(-4.0 * dot(x, x)); };
        if (name == "halfplane") return [](Vec2 x) { return x.x > 0.2 ? 1.0 : 0.0; };
        return [](Vec2 x) { return std::abs(norm(x) - 0.5) < 0.15 ? 2.0 : 0.0; };
    };
    std::vector<MaxPrincipleCase> out;
    for (const auto& st : setups) {
        const Domain dom = parse_domain(st.domain);
        for (double s : {0.25, 0.5})
            for (const auto& g : st.gs) {
                SolveOptions opt;
                opt.threads = threads;
                const auto sol = solve_problem(dom, s, g_of(g), st.h, opt);
                MaxPrincipleCase c{st.domain, g, s, st.h, std::numeric_limits<double>::infinity(), 0};
                for (std::size_t k = 0; k < sol.u.size(); ++k) {
                    if (!sol.u.interior(k)) continue;
                    c.min_u = std::min(c.min_u, sol.u.at(k));
                    if (sol.u.at(k) < 0.0) ++c.negative_nodes;
                }
                out.push_back(c);
            }
    }
    return out;
}

}  // namespace afrac
