#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "afrac/error.hpp"
#include "shape.hpp"

namespace afrac {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Box element_bbox(const std::vector<BoundaryElement>& els) {
    Box b{{kInf, kInf}, {-kInf, -kInf}};
    auto grow = [&](Vec2 p) {
        b.lo.x = std::min(b.lo.x, p.x);
        b.lo.y = std::min(b.lo.y, p.y);
        b.hi.x = std::max(b.hi.x, p.x);
        b.hi.y = std::max(b.hi.y, p.y);
    };
    for (const auto& e : els) {
        if (e.type == BoundaryElement::Type::segment) {
            grow(e.p0);
            grow(e.p1);
        } else {
            for (int k = 0; k <= 256; ++k) grow(e.point(k / 256.0));
            // extreme points of the circle that fall on the arc
            for (int q = 0; q < 4; ++q) {
                const Vec2 p = e.center + e.radius * unit(q * M_PI / 2.0);
                double t = 0.0;
                if (e.closest(p, &t) < 1e-12) grow(p);
            }
        }
    }
    return b;
}

class BallShape final : public Shape {
public:
    BallShape(Vec2 c, double r) : c_(c), r_(r), chain_{BoundaryElement::arc(c, r, 0.0, 2.0 * M_PI)} {
        require(r > 0.0, "ball radius must be positive");
    }
    DomainKind kind() const override { return DomainKind::ball; }
    bool contains(Vec2 x) const override { return norm(x - c_) < r_; }
    double distance(Vec2 x) const override { return std::abs(norm(x - c_) - r_); }
    bool convex() const override { return true; }
    bool c11() const override { return true; }
    double bounding_radius() const override { return norm(c_) + r_; }
    Box bbox() const override { return {{c_.x - r_, c_.y - r_}, {c_.x + r_, c_.y + r_}}; }
    const std::vector<BoundaryElement>& boundary() const override { return chain_; }
    std::string describe() const override {
        return "ball(" + fmt(c_.x) + "," + fmt(c_.y) + "," + fmt(r_) + ")";
    }

private:
    Vec2 c_;
    double r_;
    std::vector<BoundaryElement> chain_;
};

class PolygonShape final : public Shape {
public:
    explicit PolygonShape(std::vector<Vec2> v) : v_(std::move(v)) {
        require(v_.size() >= 3, "polygon needs at least 3 vertices");
        const std::size_t n = v_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 a = v_[i], b = v_[(i + 1) % n], c = v_[(i + 2) % n];
            require(cross(b - a, c - b) > 0.0, "polygon must be strictly convex and counterclockwise");
            edges_.push_back(BoundaryElement::segment(a, b));
        }
        double turn = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 d0 = v_[(i + 1) % n] - v_[i];
            const Vec2 d1 = v_[(i + 2) % n] - v_[(i + 1) % n];
            turn += std::atan2(cross(d0, d1), dot(d0, d1));
        }
        require(std::abs(turn - 2.0 * M_PI) < 1e-9, "polygon edges wind more than once");
        box_ = element_bbox(edges_);
    }
    DomainKind kind() const override { return DomainKind::convex_polygon; }
    bool contains(Vec2 x) const override {
        const std::size_t n = v_.size();
        for (std::size_t i = 0; i < n; ++i)
            if (cross(v_[(i + 1) % n] - v_[i], x - v_[i]) <= 0.0) return false;
        return true;
    }
    double distance(Vec2 x) const override {
        double d = kInf;
        for (const auto& e : edges_) d = std::min(d, segment_distance(e.p0, e.p1, x, nullptr));
        return d;
    }
    bool convex() const override { return true; }
    bool c11() const override { return false; }
    double bounding_radius() const override {
        double r = 0.0;
        for (auto p : v_) r = std::max(r, norm(p));
        return r;
    }
    Box bbox() const override { return box_; }
    const std::vector<BoundaryElement>& boundary() const override { return edges_; }
    std::string describe() const override {
        std::string s = "polygon(";
        for (std::size_t i = 0; i < v_.size(); ++i)
            s += (i ? ",(" : "(") + fmt(v_[i].x) + "," + fmt(v_[i].y) + ")";
        return s + ")";
    }

private:
    std::vector<Vec2> v_;
    std::vector<BoundaryElement> edges_;
    Box box_;
};

// Closed chain of segments and circular arcs with a continuous unit tangent.
class ArcChainShape final : public Shape {
public:
    ArcChainShape(std::vector<BoundaryElement> els, std::string name) : els_(std::move(els)), name_(std::move(name)) {
        require(!els_.empty(), "boundary chain is empty");
        const std::size_t n = els_.size();
        double area = 0.0;
        convex_ = true;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = els_[i];
            const auto& b = els_[(i + 1) % n];
            require(norm(a.point(1.0) - b.point(0.0)) < 1e-9, "boundary chain is not closed at element " + std::to_string(i));
            require(norm(a.tangent(1.0) - b.tangent(0.0)) < 1e-7, "boundary chain has a corner at element " + std::to_string(i));
            if (a.type == BoundaryElement::Type::arc && a.sweep < 0.0) convex_ = false;
            for (int k = 0; k < 512; ++k) area += 0.5 * cross(a.point(k / 512.0), a.point((k + 1) / 512.0));
        }
        require(area > 0.0, "boundary chain must be counterclockwise");
        box_ = element_bbox(els_);
        radius_ = 0.0;
        for (const auto& e : els_)
            for (int k = 0; k <= 512; ++k) radius_ = std::max(radius_, norm(e.point(k / 512.0)));
        radius_ *= 1.0 + 1e-9;
    }
    DomainKind kind() const override { return DomainKind::arc_chain; }
    bool contains(Vec2 x) const override {
        if (x.x <= box_.lo.x || x.x >= box_.hi.x || x.y <= box_.lo.y || x.y >= box_.hi.y) return false;
        return signed_distance(x) < 0.0;
    }
    double distance(Vec2 x) const override { return std::abs(signed_distance(x)); }
    bool convex() const override { return convex_; }
    bool c11() const override { return true; }
    double bounding_radius() const override { return radius_; }
    Box bbox() const override { return box_; }
    const std::vector<BoundaryElement>& boundary() const override { return els_; }
    std::string describe() const override { return name_; }

    // Negative inside: the sign comes from the outward normal at the nearest point.
    double signed_distance(Vec2 x) const {
        double best = kInf;
        double sign = 1.0;
        for (const auto& e : els_) {
            double t = 0.0;
            const double d = e.closest(x, &t);
            if (d < best) {
                best = d;
                const Vec2 tau = e.tangent(t);
                const Vec2 outward{tau.y, -tau.x};
                sign = dot(x - e.point(t), outward) >= 0.0 ? 1.0 : -1.0;
            }
        }
        return sign * best;
    }

private:
    std::vector<BoundaryElement> els_;
    std::string name_;
    bool convex_ = true;
    Box box_;
    double radius_ = 0.0;
};

// B_R ∪ {|x2| < R exp(-|x1|/R)}
class CuspShape final : public Shape {
public:
    explicit CuspShape(double R) : R_(R) {
        require(R > 0.0, "cusp radius must be positive");
        double a = 0.9;
        for (int k = 0; k < 60; ++k) {
            const double f = a * a + std::exp(-2.0 * a) - 1.0;
            const double fp = 2.0 * a - 2.0 * std::exp(-2.0 * a);
            a -= f / fp;
        }
        xc_ = a * R;
        thc_ = std::acos(a);
    }
    DomainKind kind() const override { return DomainKind::cusp; }
    bool contains(Vec2 x) const override {
        return norm(x) < R_ || std::abs(x.y) < R_ * std::exp(-std::abs(x.x) / R_);
    }
    double distance(Vec2 x) const override {
        const Vec2 q{std::abs(x.x), std::abs(x.y)};
        // arc part in the first quadrant: angles [thc, pi/2]
        const double phi = std::atan2(q.y, q.x);
        double d;
        if (phi >= thc_) {
            d = std::abs(norm(q) - R_);
        } else {
            d = norm(q - R_ * unit(thc_));
        }
        return std::min(d, branch_distance(q));
    }
    bool convex() const override { return false; }
    bool c11() const override { return false; }
    double bounding_radius() const override { return kInf; }
    Box bbox() const override { return {{-kInf, -R_}, {kInf, R_}}; }
    std::string describe() const override { return "cusp(" + fmt(R_) + ")"; }

private:
    // distance to {(t, R e^{-t/R}) : t >= xc}
    double branch_distance(Vec2 q) const {
        auto f = [&](double t) { return R_ * std::exp(-t / R_); };
        auto g = [&](double t) {
            const double dx = t - q.x, dy = f(t) - q.y;
            return dx * dx + dy * dy;
        };
        const double t0 = std::max(q.x, xc_);
        const double D = std::sqrt(g(t0));
        const double lo = std::max(xc_, q.x - D);
        const double hi = std::max(lo, q.x + D);
        double bt = t0, bg = g(t0);
        const int n = 64;
        for (int k = 0; k <= n; ++k) {
            const double t = lo + (hi - lo) * k / n;
            const double v = g(t);
            if (v < bg) {
                bg = v;
                bt = t;
            }
        }
        double t = bt;
        for (int it = 0; it < 50; ++it) {
            const double e = std::exp(-t / R_);
            const double dy = R_ * e - q.y;
            const double g1 = 2.0 * (t - q.x) - 2.0 * dy * e;
            const double g2 = 2.0 + 2.0 * e * e + 2.0 * dy * e / R_;
            if (g2 <= 0.0) break;
            const double step = g1 / g2;
            double tn = std::clamp(t - step, lo, hi);
            if (g(tn) > g(t)) break;
            if (std::abs(tn - t) <= 1e-16 * std::max(1.0, std::abs(t))) {
                t = tn;
                break;
            }
            t = tn;
        }
        return std::sqrt(std::min(g(t), bg));
    }

    double R_;
    double xc_ = 0.0;
    double thc_ = 0.0;
};

// {x2 > h(x1)}
class GraphShape final : public Shape {
public:
    explicit GraphShape(GraphPatch p) : p_(std::move(p)) {
        require(p_.kappa > 0.0 && p_.K >= 0.0, "graph patch needs kappa > 0 and K >= 0");
    }
    DomainKind kind() const override { return DomainKind::graph_patch; }
    bool contains(Vec2 x) const override { return x.y > p_.h.value(x.x); }
    double distance(Vec2 x) const override {
        const double D = std::abs(x.y - p_.h.value(x.x));
        if (D == 0.0) return 0.0;
        const double lo = x.x - D, hi = x.x + D;
        auto g = [&](double t) {
            const double dx = t - x.x, dy = p_.h.value(t) - x.y;
            return dx * dx + dy * dy;
        };
        std::vector<double> cuts{lo};
        for (double k : p_.h.knots())
            if (k > lo && k < hi) cuts.push_back(k);
        cuts.push_back(hi);
        double best = D * D;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double a = cuts[i], b = cuts[i + 1];
            double bt = a, bg = g(a);
            for (int k = 1; k <= 32; ++k) {
                const double t = a + (b - a) * k / 32.0;
                const double v = g(t);
                if (v < bg) {
                    bg = v;
                    bt = t;
                }
            }
            double t = bt;
            for (int it = 0; it < 40; ++it) {
                const double hv = p_.h.value(t), hs = p_.h.slope(t);
                const double eps = 1e-7 * std::max(1.0, b - a);
                const double hss = (p_.h.slope(std::min(t + eps, b)) - p_.h.slope(std::max(t - eps, a))) /
                                   (std::min(t + eps, b) - std::max(t - eps, a));
                const double g1 = 2.0 * (t - x.x) + 2.0 * (hv - x.y) * hs;
                const double g2 = 2.0 + 2.0 * hs * hs + 2.0 * (hv - x.y) * hss;
                if (g2 <= 0.0) break;
                const double tn = std::clamp(t - g1 / g2, a, b);
                if (g(tn) > g(t)) break;
                if (std::abs(tn - t) < 1e-15 * std::max(1.0, std::abs(t))) {
                    t = tn;
                    break;
                }
                t = tn;
            }
            best = std::min({best, bg, g(t), g(b)});
        }
        return std::sqrt(best);
    }
    bool convex() const override { return false; }
    bool c11() const override { return true; }
    double bounding_radius() const override { return kInf; }
    Box bbox() const override { return p_.box; }
    const GraphPatch* patch() const override { return &p_; }
    std::string describe() const override { return "graph(kappa=" + fmt(p_.kappa) + ",K=" + fmt(p_.K) + ")"; }

private:
    GraphPatch p_;
};

}  // namespace

bool Box::bounded() const {
    return std::isfinite(lo.x) && std::isfinite(lo.y) && std::isfinite(hi.x) && std::isfinite(hi.y);
}

Domain::Domain(std::shared_ptr<const Shape> shape) : shape_(std::move(shape)) {}

Domain Domain::ball(Vec2 center, double radius) { return Domain(std::make_shared<BallShape>(center, radius)); }
Domain Domain::polygon(const std::vector<Vec2>& v) { return Domain(std::make_shared<PolygonShape>(v)); }
Domain Domain::graph(const GraphPatch& patch) { return Domain(std::make_shared<GraphShape>(patch)); }
Domain Domain::cusp(double R) { return Domain(std::make_shared<CuspShape>(R)); }
Domain Domain::arc_chain(std::vector<BoundaryElement> els, std::string name) {
    return Domain(std::make_shared<ArcChainShape>(std::move(els), std::move(name)));
}

Domain Domain::stadium(double x0, double x1, double yc, double r) {
    require(x1 > x0 && r > 0.0, "stadium needs x0 < x1 and r > 0");
    std::vector<BoundaryElement> els{
        BoundaryElement::segment({x0, yc - r}, {x1, yc - r}),
        BoundaryElement::arc({x1, yc}, r, -M_PI / 2.0, M_PI),
        BoundaryElement::segment({x1, yc + r}, {x0, yc + r}),
        BoundaryElement::arc({x0, yc}, r, M_PI / 2.0, M_PI),
    };
    return arc_chain(std::move(els), "stadium(" + fmt(x0) + "," + fmt(x1) + "," + fmt(yc) + "," + fmt(r) + ")");
}

// Ball B_4 merged with the band |y| < depth, cut off at x = -8.5 below the axis and at the
// wall x = -6+eps above it, so the flat segment [-8,-6]x{0} faces an empty quadrant.
// Convex corners use radii rc and rt, concave ones fillets of radius eps.
// Traversal starts at (-6,0) heading left.
Domain Domain::counterexample(double eps, double depth) {
    require(eps > 0.0 && eps <= 0.25, "counterexample fillet radius must lie in (0, 0.25]");
    require(depth >= 1.5 && depth <= 3.0, "lobe depth must lie in [1.5, 3]");
    const double R = 4.0;
    const double rc = 0.5;  // rounding at the lobe's left corners; equals the tangent-ball radius
    const double rt = 1.0;  // rounding where the upper wall turns into the top edge
    const double wall = -6.0 + eps;
    // concave fillet of radius eps between B_R and a horizontal edge at height y (outside both)
    auto fillet_x = [&](double y) { return -std::sqrt((R + eps) * (R + eps) - (std::abs(y) + eps) * (std::abs(y) + eps)); };

    const double yb = -depth, yt = depth;
    const Vec2 Cb{fillet_x(yb), yb - eps};
    const Vec2 Ct{fillet_x(yt), yt + eps};
    const double ang_b = std::atan2(Cb.y, Cb.x);  // direction of the bottom fillet center seen from 0
    const double ang_t = std::atan2(Ct.y, Ct.x);
    double ball_sweep = ang_t - ang_b;
    while (ball_sweep <= 0.0) ball_sweep += 2.0 * M_PI;
    // both fillets turn clockwise: bottom edge -> ball, ball -> top edge
    const double fb0 = M_PI / 2.0, fb1 = ang_b + M_PI;
    const double ft0 = ang_t - M_PI, ft1 = -M_PI / 2.0;

    std::vector<BoundaryElement> els{
        BoundaryElement::segment({-6.0, 0.0}, {-8.0, 0.0}),
        BoundaryElement::arc({-8.0, -rc}, rc, M_PI / 2.0, M_PI / 2.0),
        BoundaryElement::segment({-8.0 - rc, -rc}, {-8.0 - rc, yb + rc}),
        BoundaryElement::arc({-8.0, yb + rc}, rc, M_PI, M_PI / 2.0),
        BoundaryElement::segment({-8.0, yb}, {Cb.x, yb}),
        BoundaryElement::arc(Cb, eps, fb0, fb1 - fb0),
        BoundaryElement::arc({0.0, 0.0}, R, ang_b, ball_sweep),
        BoundaryElement::arc(Ct, eps, ft0, ft1 - ft0),
        BoundaryElement::segment({Ct.x, yt}, {wall + rt, yt}),
        BoundaryElement::arc({wall + rt, yt - rt}, rt, M_PI / 2.0, M_PI / 2.0),
        BoundaryElement::segment({wall, yt - rt}, {wall, eps}),
        BoundaryElement::arc({-6.0, eps}, eps, 0.0, -M_PI / 2.0),
    };
    return arc_chain(std::move(els), "counterexample(" + fmt(eps) + ")");
}

DomainKind Domain::kind() const { return shape_->kind(); }
bool Domain::contains(Vec2 x) const { return shape_->contains(x); }
double Domain::distance(Vec2 x) const { return shape_->distance(x); }
bool Domain::convex() const { return shape_->convex(); }
bool Domain::c11() const { return shape_->c11(); }
double Domain::bounding_radius() const { return shape_->bounding_radius(); }
Box Domain::bbox() const { return shape_->bbox(); }
const std::vector<BoundaryElement>& Domain::boundary() const { return shape_->boundary(); }
const GraphPatch* Domain::patch() const { return shape_->patch(); }
std::string Domain::describe() const { return shape_->describe(); }

double dist_to_boundary(const Domain& dom, Vec2 x) { return dom.distance(x); }
double joint_distance(const Domain& dom, Vec2 x, Vec2 y) { return std::min(dom.distance(x), dom.distance(y)); }

}  // namespace afrac
