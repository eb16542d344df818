#include "afrac/grid.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "afrac/error.hpp"

namespace afrac {

GridFunction::GridFunction(Domain dom, Vec2 origin, double h, int nx, int ny)
    : dom_(std::move(dom)), origin_(origin), h_(h), nx_(nx), ny_(ny) {
    require(h > 0.0 && nx >= 1 && ny >= 1, "grid needs h > 0 and positive extents");
    values_.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    mask_.assign(values_.size(), 0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (dom_.contains(node(i, j))) {
                mask_[index(i, j)] = 1;
                ++interior_count_;
            }
}

GridFunction GridFunction::covering(const Domain& dom, double h) {
    const Box b = dom.bbox();
    require(b.bounded(), "grid needs a bounded domain");
    const long i0 = static_cast<long>(std::floor(b.lo.x / h)) - 1;
    const long i1 = static_cast<long>(std::ceil(b.hi.x / h)) + 1;
    const long j0 = static_cast<long>(std::floor(b.lo.y / h)) - 1;
    const long j1 = static_cast<long>(std::ceil(b.hi.y / h)) + 1;
    require((i1 - i0 + 1) * (j1 - j0 + 1) < 200000000L, "grid too large");
    return GridFunction(dom, {h * i0, h * j0}, h, static_cast<int>(i1 - i0 + 1), static_cast<int>(j1 - j0 + 1));
}

GridFunction GridFunction::sample(const Domain& dom, double h, const std::function<double(Vec2)>& f) {
    GridFunction g = covering(dom, h);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (g.interior(i, j)) g.set(i, j, f(g.node(i, j)));
    return g;
}

GridFunction GridFunction::like() const {
    GridFunction g = *this;
    std::fill(g.values_.begin(), g.values_.end(), 0.0);
    return g;
}

void GridFunction::set(int i, int j, double v) { set(index(i, j), v); }

void GridFunction::set(std::size_t k, double v) {
    require(std::isfinite(v), "grid values must be finite");
    values_[k] = mask_[k] ? v : 0.0;
}

bool GridFunction::locate(Vec2 x, int* i, int* j) const {
    const long ii = std::lround((x.x - origin_.x) / h_);
    const long jj = std::lround((x.y - origin_.y) / h_);
    if (ii < 0 || jj < 0 || ii >= nx_ || jj >= ny_) return false;
    *i = static_cast<int>(ii);
    *j = static_cast<int>(jj);
    return true;
}

double GridFunction::interpolate(Vec2 x) const {
    if (!dom_.contains(x)) return 0.0;
    const double fx = (x.x - origin_.x) / h_;
    const double fy = (x.y - origin_.y) / h_;
    const long i = static_cast<long>(std::floor(fx));
    const long j = static_cast<long>(std::floor(fy));
    if (i < 0 || j < 0 || i + 1 >= nx_ || j + 1 >= ny_) return 0.0;
    const double tx = fx - i, ty = fy - j;
    const int ii = static_cast<int>(i), jj = static_cast<int>(j);
    return (1 - tx) * (1 - ty) * at(ii, jj) + tx * (1 - ty) * at(ii + 1, jj) + (1 - tx) * ty * at(ii, jj + 1) +
           tx * ty * at(ii + 1, jj + 1);
}

double GridFunction::interpolate_cubic(Vec2 x) const {
    if (!dom_.contains(x)) return 0.0;
    const double fx = (x.x - origin_.x) / h_;
    const double fy = (x.y - origin_.y) / h_;
    auto weights = [](double f, long* base, double w[4]) {
        long i = std::lround(f);
        if (std::abs(f - static_cast<double>(i)) < 1e-9) {
            *base = i - 1;
            w[0] = 0.0, w[1] = 1.0, w[2] = 0.0, w[3] = 0.0;
            return;
        }
        i = static_cast<long>(std::floor(f));
        const double t = f - static_cast<double>(i);
        *base = i - 1;
        w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
        w[1] = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        w[2] = -(t + 1.0) * t * (t - 2.0) / 2.0;
        w[3] = (t + 1.0) * t * (t - 1.0) / 6.0;
    };
    long bx, by;
    double wx[4], wy[4];
    weights(fx, &bx, wx);
    weights(fy, &by, wy);
    double acc = 0.0;
    for (int b = 0; b < 4; ++b) {
        if (wy[b] == 0.0) continue;
        const long j = by + b;
        for (int a = 0; a < 4; ++a) {
            if (wx[a] == 0.0) continue;
            const long i = bx + a;
            if (i < 0 || j < 0 || i >= nx_ || j >= ny_) continue;
            acc += wx[a] * wy[b] * at(static_cast<int>(i), static_cast<int>(j));
        }
    }
    return acc;
}

double GridFunction::interpolate_boundary_weighted(int i, double y, double s) const {
    const double x = origin_.x + h_ * i;
    if (!dom_.contains({x, y})) return 0.0;
    auto ratio = [&](int j) -> double {
        const Vec2 p = node(i, j);
        return at(i, j) / std::pow(dom_.distance(p), s);
    };
    auto ok = [&](int j) { return j >= 0 && j < ny_ && interior(i, j); };
    const double fy = (y - origin_.y) / h_;
    const int j = static_cast<int>(std::floor(fy));
    const double t = fy - j;
    double v;
    if (ok(j) && ok(j + 1)) {
        v = (1 - t) * ratio(j) + t * ratio(j + 1);
    } else if (ok(j)) {
        // the node above is outside: extrapolate from below
        v = ok(j - 1) ? ratio(j) + t * (ratio(j) - ratio(j - 1)) : ratio(j);
    } else if (ok(j + 1)) {
        v = ok(j + 2) ? ratio(j + 1) - (1 - t) * (ratio(j + 2) - ratio(j + 1)) : ratio(j + 1);
    } else {
        return 0.0;
    }
    return v * std::pow(dom_.distance({x, y}), s);
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& fn) {
    const std::size_t t = static_cast<std::size_t>(std::max(1, threads));
    if (t == 1 || n < 2 * t) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + t - 1) / t;
    for (std::size_t k = 0; k < t; ++k) {
        const std::size_t b = k * chunk, e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace afrac
