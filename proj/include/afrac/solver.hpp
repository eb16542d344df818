#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "afrac/geometry.hpp"
#include "afrac/grid.hpp"
#include "afrac/operator.hpp"
#include "afrac/spectral_measure.hpp"

namespace afrac {

struct CsrMatrix {
    std::vector<std::int64_t> row_ptr;
    std::vector<std::int32_t> cols;
    std::vector<double> vals;
    std::size_t rows() const { return row_ptr.empty() ? 0 : row_ptr.size() - 1; }
    double entry(std::size_t r, std::size_t c) const;
};

// Discrete directional operator restricted to the interior nodes of a grid (2D) or of an
// interval (1D). Unknown k lives at grid index node_of[k].
class LinearSystem {
public:
    int dimension() const { return dim_; }
    std::size_t size() const { return node_of_.size(); }
    double s() const { return s_; }
    double h() const { return h_; }
    const std::array<double, 2>& coefficients() const { return coeffs_; }
    const std::vector<std::size_t>& node_of() const { return node_of_; }
    // -1 for nodes outside the domain
    std::int64_t system_index(std::size_t node) const { return system_of_[node]; }
    const GridFunction& layout() const { return *layout_; }  // 2D only
    const std::vector<double>& interval_nodes() const { return xs_; }  // 1D only
    bool has_matrix() const { return matrix_.has_value(); }
    const CsrMatrix& matrix() const;

    // y = A x. Matrix-free along grid lines when no CSR matrix was built.
    void apply(const double* x, double* y, int threads = 1) const;

    friend LinearSystem assemble(const Domain&, const SpectralMeasure&, double, double, bool, Normalization, int);
    friend LinearSystem assemble_interval(double, double, double, double, Normalization);

private:
    int dim_ = 2;
    double s_ = 0.5, h_ = 0.0;
    std::array<double, 2> coeffs_{1.0, 1.0};
    std::vector<std::size_t> node_of_;
    std::vector<std::int64_t> system_of_;
    std::optional<GridFunction> layout_;
    std::vector<double> xs_;
    std::vector<double> band_x_, band_y_;
    std::optional<CsrMatrix> matrix_;
};

// Rows of the CSR matrix are built when nnz stays below this; otherwise the operator is matrix-free.
constexpr std::size_t kMaxMatrixEntries = 20'000'000;

LinearSystem assemble(const Domain& dom, const SpectralMeasure& a, double s, double h, bool build_matrix = true,
                      Normalization norm = Normalization::unit_symbol, int threads = 1);
// 1D problem on (lo, hi) with unknowns at lo + k h, 0 < k < (hi - lo)/h.
LinearSystem assemble_interval(double lo, double hi, double s, double h,
                               Normalization norm = Normalization::unit_symbol);

struct SolveStats {
    double residual = 0.0;  // relative: |b - Au| / |b|
    int iterations = 0;
    double wall_time_ms = 0.0;
};

// Unpreconditioned conjugate gradients from a zero start.
std::vector<double> conjugate_gradient(const LinearSystem& sys, const std::vector<double>& b, double lin_tol,
                                       SolveStats* stats = nullptr, int threads = 1);

GridFunction solve(const LinearSystem& sys, const GridFunction& g, double lin_tol = 1e-10,
                   SolveStats* stats = nullptr, int threads = 1);

struct Solution {
    GridFunction u;
    SolveStats stats;
    std::string domain;
    double s = 0.0;
    double h = 0.0;
};

struct SolveOptions {
    SpectralMeasure measure = SpectralMeasure::coordinate_axes(2);
    double lin_tol = 1e-10;
    int threads = 1;
    Normalization normalization = Normalization::unit_symbol;
};

Solution solve_problem(const Domain& dom, double s, const std::function<double(Vec2)>& g, double h,
                       const SolveOptions& opt = {});

struct IntervalSolution {
    std::vector<double> x;
    std::vector<double> u;
    SolveStats stats;
};
IntervalSolution solve_interval(double lo, double hi, double s, const std::function<double(double)>& g, double h,
                                double lin_tol = 1e-10, Normalization norm = Normalization::unit_symbol);

}  // namespace afrac
