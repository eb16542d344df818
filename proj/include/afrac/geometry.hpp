#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "afrac/vec2.hpp"

namespace afrac {

struct Box {
    Vec2 lo;
    Vec2 hi;
    bool bounded() const;
};

// One piece of a tangent-continuous boundary chain, traversed with the domain on the left.
struct BoundaryElement {
    enum class Type { segment, arc };
    Type type = Type::segment;
    Vec2 p0, p1;            // segment endpoints
    Vec2 center;            // arc data: point(t) = center + radius*(cos, sin)(theta0 + t*sweep)
    double radius = 0.0;
    double theta0 = 0.0;
    double sweep = 0.0;     // signed; > 0 counterclockwise

    static BoundaryElement segment(Vec2 a, Vec2 b);
    static BoundaryElement arc(Vec2 center, double radius, double theta0, double sweep);

    double length() const;
    Vec2 point(double t) const;    // t in [0, 1], proportional to arc length
    Vec2 tangent(double t) const;  // unit
    // Distance from x to the element; *t receives the parameter of the closest point.
    double closest(Vec2 x, double* t) const;
};

// Piecewise-quadratic C^{1,1} function of one variable: on [knot_i, knot_{i+1}],
// h(x) = c0_i + c1_i (x - knot_i) + c2_i (x - knot_i)^2; linear outside the knot range.
class QuadraticSpline {
public:
    // From the value and slope at knots[0] and one curvature coefficient per interval.
    QuadraticSpline(std::vector<double> knots, double value0, double slope0, std::vector<double> c2);

    static QuadraticSpline flat();
    static QuadraticSpline parabola(double a, double b = 0.0, double half_width = 50.0);  // a x^2 + b x
    static QuadraticSpline smoothed_abs(double eps);                                       // |x| rounded on [-eps, eps]

    double value(double x) const;
    double slope(double x) const;
    double slope_lipschitz() const;  // sup |h''|
    const std::vector<double>& knots() const { return knots_; }

private:
    std::size_t piece(double x) const;
    std::vector<double> knots_, c0_, c1_, c2_;
};

struct GraphPatch {
    QuadraticSpline h;
    double K = 1.0;      // bound on the Lipschitz constant of h'
    double kappa = 1.0;  // patch radius: Omega ∩ B_{2 kappa} = {x2 > h(x1)}
    Box box{{-2.0, -2.0}, {2.0, 2.0}};
};

class Shape;

enum class DomainKind { ball, convex_polygon, graph_patch, cusp, arc_chain };

// Immutable domain handle with membership and distance-to-boundary queries.
class Domain {
public:
    static Domain ball(Vec2 center, double radius);
    static Domain polygon(const std::vector<Vec2>& ccw_vertices);
    static Domain graph(const GraphPatch& patch);
    static Domain cusp(double R);
    static Domain counterexample(double eps_geom = 0.05, double lobe_depth = 2.5);
    static Domain stadium(double x0, double x1, double yc, double r);
    static Domain arc_chain(std::vector<BoundaryElement> elements, std::string name);

    DomainKind kind() const;
    bool contains(Vec2 x) const;
    double distance(Vec2 x) const;  // to the boundary; defined everywhere
    bool convex() const;
    bool c11() const;  // boundary has a C^{1,1} parametrization
    double bounding_radius() const;  // Omega ⊂ B_{bounding_radius}(0); inf if unbounded
    Box bbox() const;
    // Closed tangent-continuous boundary chain (or the polygon's edges), empty if none.
    const std::vector<BoundaryElement>& boundary() const;
    const GraphPatch* patch() const;  // non-null for graph patches
    std::string describe() const;

    explicit Domain(std::shared_ptr<const Shape> shape);

private:
    std::shared_ptr<const Shape> shape_;
};

double dist_to_boundary(const Domain& dom, Vec2 x);
double joint_distance(const Domain& dom, Vec2 x, Vec2 y);

struct InnerBall {
    Vec2 q;
    double r = 0.0;
};
InnerBall inner_sphere_center(const GraphPatch& patch, Vec2 p, double kappa, double K);
bool verify_inner_ball(const GraphPatch& patch, Vec2 q, double r, int samples, std::uint64_t seed = 1);

struct InnerBallBattery {
    int cases = 0;
    int violations = 0;
};
// Random piecewise-quadratic graphs through the origin, random boundary points in B_kappa;
// each inner ball is checked with `samples` points.
InnerBallBattery inner_ball_battery(int cases, std::uint64_t seed, int samples = 10000);

struct BandMeasure {
    double band_volume = 0.0;
    double std_error = 0.0;
    double boundary_area = 0.0;
};
// Area of {x in Omega ∩ A_{R1,R2,P} : d(x) <= mu} and the boundary length inside A_{R1-mu,R2+mu,P}.
BandMeasure band_measure(const Domain& dom, Vec2 P, double R1, double R2, double mu, long samples,
                         std::uint64_t seed = 1);
// max of band_volume / (mu boundary_area) over a fixed battery: balls, the unit square, a stadium and the
// counterexample domain, several annuli, mu in {0.02, 0.05, 0.1}.
double band_battery_ratio(long samples, std::uint64_t seed);
// Boundary length inside {r_in <= |x - P| <= r_out}.
double boundary_length_in_annulus(const Domain& dom, Vec2 P, double r_in, double r_out);
// Boundary length inside B_{8R} \ B_R (centered at the origin).
double annulus_boundary_area(const Domain& dom, double R);

// min(0.1, 1/(4K))
double patch_constant(double K);
double level_set_lipschitz_probe(const GraphPatch& patch, double t, int probes);

std::vector<Vec2> boundary_polyline(const Domain& dom, std::size_t vertices);

// "ball(cx,cy,r)" | "polygon((x,y),...)" | "counterexample(eps)" | "cusp(R)" | "stadium(x0,x1,yc,r)"
Domain parse_domain(const std::string& text);

}  // namespace afrac
