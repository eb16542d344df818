#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "afrac/geometry.hpp"

namespace afrac {

// Values on a uniform grid, extended by zero outside the domain. Node (i, j) sits at
// origin + h*(i, j); a node is interior iff its position lies in the domain.
class GridFunction {
public:
    GridFunction(Domain dom, Vec2 origin, double h, int nx, int ny);

    // Grid aligned to integer multiples of h covering the domain's bounding box plus one cell.
    static GridFunction covering(const Domain& dom, double h);
    static GridFunction sample(const Domain& dom, double h, const std::function<double(Vec2)>& f);
    GridFunction like() const;  // same grid, zero values

    const Domain& domain() const { return dom_; }
    Vec2 origin() const { return origin_; }
    double h() const { return h_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::size_t size() const { return values_.size(); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
    Vec2 node(int i, int j) const { return {origin_.x + h_ * i, origin_.y + h_ * j}; }
    bool interior(int i, int j) const { return mask_[index(i, j)] != 0; }
    bool interior(std::size_t k) const { return mask_[k] != 0; }
    std::size_t interior_count() const { return interior_count_; }
    const std::vector<std::uint8_t>& mask() const { return mask_; }

    double at(int i, int j) const { return values_[index(i, j)]; }
    double at(std::size_t k) const { return values_[k]; }
    // Writes are ignored (value forced to 0) at non-interior nodes.
    void set(int i, int j, double v);
    void set(std::size_t k, double v);
    const std::vector<double>& values() const { return values_; }
    // Raw storage; writers must leave non-interior nodes at zero.
    double* data() { return values_.data(); }
    // Nearest node index to x, or -1 components if outside the grid.
    bool locate(Vec2 x, int* i, int* j) const;
    // Bilinear interpolation of the zero-extended field; exactly 0 outside the domain.
    double interpolate(Vec2 x) const;
    // Tensor-product 4-point Lagrange interpolation; exact at nodes.
    double interpolate_cubic(Vec2 x) const;
    // Interpolation of u/d^s along the vertical grid line through column i, times d(x)^s.
    // Suited to evaluating near a boundary where u behaves like d^s.
    double interpolate_boundary_weighted(int i, double y, double s) const;

    // Optional tag recorded in the JSON sidecar.
    double s_tag = 0.0;

private:
    Domain dom_;
    Vec2 origin_;
    double h_;
    int nx_, ny_;
    std::vector<double> values_;
    std::vector<std::uint8_t> mask_;
    std::size_t interior_count_ = 0;
};

// Runs fn(begin, end) over [0, n) split into contiguous chunks on up to `threads` threads.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace afrac
