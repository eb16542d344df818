#pragma once

#include <string>
#include <vector>

#include "afrac/geometry.hpp"

namespace afrac {

class Shape {
public:
    virtual ~Shape() = default;
    virtual DomainKind kind() const = 0;
    virtual bool contains(Vec2 x) const = 0;
    virtual double distance(Vec2 x) const = 0;
    virtual bool convex() const = 0;
    virtual bool c11() const = 0;
    virtual double bounding_radius() const = 0;
    virtual Box bbox() const = 0;
    virtual const std::vector<BoundaryElement>& boundary() const {
        static const std::vector<BoundaryElement> none;
        return none;
    }
    virtual const GraphPatch* patch() const { return nullptr; }
    virtual std::string describe() const = 0;
};

double segment_distance(Vec2 a, Vec2 b, Vec2 x, double* t);

}  // namespace afrac
