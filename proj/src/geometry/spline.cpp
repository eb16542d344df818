#include <algorithm>
#include <cmath>

#include "afrac/error.hpp"
#include "afrac/geometry.hpp"

namespace afrac {

QuadraticSpline::QuadraticSpline(std::vector<double> knots, double value0, double slope0, std::vector<double> c2)
    : knots_(std::move(knots)), c2_(std::move(c2)) {
    require(knots_.size() >= 2 && c2_.size() + 1 == knots_.size(), "spline needs one curvature per interval");
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
        require(knots_[i + 1] > knots_[i], "spline knots must increase");
    double v = value0, d = slope0;
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
        c0_.push_back(v);
        c1_.push_back(d);
        const double L = knots_[i + 1] - knots_[i];
        v += d * L + c2_[i] * L * L;
        d += 2.0 * c2_[i] * L;
    }
    c0_.push_back(v);
    c1_.push_back(d);
}

QuadraticSpline QuadraticSpline::flat() { return QuadraticSpline({-1.0, 1.0}, 0.0, 0.0, {0.0}); }

QuadraticSpline QuadraticSpline::parabola(double a, double b, double L) {
    return QuadraticSpline({-L, L}, a * L * L - b * L, -2.0 * a * L + b, {a});
}

QuadraticSpline QuadraticSpline::smoothed_abs(double eps) {
    require(eps > 0.0, "smoothing width must be positive");
    return QuadraticSpline({-eps, eps}, 0.5 * eps, -1.0, {0.5 / eps});
}

std::size_t QuadraticSpline::piece(double x) const {
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - knots_.begin());
    return std::min(k == 0 ? 0 : k - 1, knots_.size() - 2);
}

double QuadraticSpline::value(double x) const {
    if (x <= knots_.front()) return c0_.front() + c1_.front() * (x - knots_.front());
    if (x >= knots_.back()) return c0_.back() + c1_.back() * (x - knots_.back());
    const std::size_t i = piece(x);
    const double u = x - knots_[i];
    return c0_[i] + u * (c1_[i] + u * c2_[i]);
}

double QuadraticSpline::slope(double x) const {
    if (x <= knots_.front()) return c1_.front();
    if (x >= knots_.back()) return c1_.back();
    const std::size_t i = piece(x);
    return c1_[i] + 2.0 * c2_[i] * (x - knots_[i]);
}

double QuadraticSpline::slope_lipschitz() const {
    double m = 0.0;
    for (double c : c2_) m = std::max(m, 2.0 * std::abs(c));
    return m;
}

}  // namespace afrac
