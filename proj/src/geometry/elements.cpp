#include <algorithm>
#include <cmath>

#include "afrac/error.hpp"
#include "shape.hpp"

namespace afrac {

namespace {

double wrap(double t) {
    double w = std::fmod(t, 2.0 * M_PI);
    if (w < 0.0) w += 2.0 * M_PI;
    return w;
}

}  // namespace

double segment_distance(Vec2 a, Vec2 b, Vec2 x, double* t) {
    const Vec2 ab = b - a;
    const double L2 = dot(ab, ab);
    double u = L2 > 0.0 ? dot(x - a, ab) / L2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    if (t) *t = u;
    return norm(x - (a + u * ab));
}

BoundaryElement BoundaryElement::segment(Vec2 a, Vec2 b) {
    BoundaryElement e;
    e.type = Type::segment;
    e.p0 = a;
    e.p1 = b;
    return e;
}

BoundaryElement BoundaryElement::arc(Vec2 center, double radius, double theta0, double sweep) {
    require(radius > 0.0, "arc radius must be positive");
    require(std::abs(sweep) <= 2.0 * M_PI + 1e-12 && sweep != 0.0, "arc sweep must lie in [-2pi, 2pi]");
    BoundaryElement e;
    e.type = Type::arc;
    e.center = center;
    e.radius = radius;
    e.theta0 = theta0;
    e.sweep = sweep;
    e.p0 = e.point(0.0);
    e.p1 = e.point(1.0);
    return e;
}

double BoundaryElement::length() const {
    return type == Type::segment ? norm(p1 - p0) : radius * std::abs(sweep);
}

Vec2 BoundaryElement::point(double t) const {
    if (type == Type::segment) return p0 + t * (p1 - p0);
    const double th = theta0 + t * sweep;
    return {center.x + radius * std::cos(th), center.y + radius * std::sin(th)};
}

Vec2 BoundaryElement::tangent(double t) const {
    if (type == Type::segment) {
        const Vec2 d = p1 - p0;
        return (1.0 / norm(d)) * d;
    }
    const double th = theta0 + t * sweep;
    const double sg = sweep > 0 ? 1.0 : -1.0;
    return {-sg * std::sin(th), sg * std::cos(th)};
}

double BoundaryElement::closest(Vec2 x, double* t) const {
    if (type == Type::segment) return segment_distance(p0, p1, x, t);
    const Vec2 rel = x - center;
    const double rr = norm(rel);
    if (rr == 0.0) {
        if (t) *t = 0.0;
        return radius;
    }
    const double phi = std::atan2(rel.y, rel.x);
    const double span = std::abs(sweep);
    const double delta = sweep > 0 ? wrap(phi - theta0) : wrap(theta0 - phi);
    if (span >= 2.0 * M_PI - 1e-15 || delta <= span) {
        if (t) *t = std::min(delta / span, 1.0);
        return std::abs(rr - radius);
    }
    const double d0 = norm(x - p0);
    const double d1 = norm(x - p1);
    if (t) *t = d0 <= d1 ? 0.0 : 1.0;
    return std::min(d0, d1);
}

}  // namespace afrac
