#pragma once

#include <array>
#include <functional>
#include <limits>
#include <vector>

#include "afrac/grid.hpp"
#include "afrac/spectral_measure.hpp"
#include "afrac/vec2.hpp"

namespace afrac {

// raw: the bare ray integral. unit_symbol: scaled so that each pair of opposite
// unit atoms acts as the 1D fractional Laplacian with Fourier symbol |xi|^{2s}.
enum class Normalization { unit_symbol, raw };

// Factor multiplying the raw integral: Gamma(1+2s) sin(pi s) / (2 pi), or 1.
double normalization_constant(double s, Normalization norm);

struct QuadratureConfig {
    double split_radius = 1e-2;
    double tail_radius = 1e2;
    double rel_tol = 1e-10;
    int max_subdivisions = 20;
    Normalization normalization = Normalization::unit_symbol;
    void validate() const;
};

// A function on R^2 together with what the quadrature needs to know about it.
struct TestFunction {
    std::function<double(Vec2)> value;
    double sup_abs = std::numeric_limits<double>::infinity();
    // Outside B_{support_radius}(center) the function equals far_value.
    Vec2 center{0.0, 0.0};
    double support_radius = std::numeric_limits<double>::infinity();
    double far_value = 0.0;
    // Optional: radii rho > 0 at which rho -> u(x + rho*omega) fails to be smooth.
    std::function<std::vector<double>(Vec2 x, Vec2 omega)> kinks;
};

struct PointEvaluation {
    double value = 0.0;  // midpoint of [lo, hi]
    double lo = 0.0;
    double hi = 0.0;
    double tail_radius = 0.0;  // truncation radius actually used
};

PointEvaluation evaluate_L_point(const TestFunction& u, Vec2 x, const SpectralMeasure& a, double s,
                                 const QuadratureConfig& q = {});
double apply_L_point(const TestFunction& u, Vec2 x, const SpectralMeasure& a, double s,
                     const QuadratureConfig& q = {});

// Raw ray integral int_0^inf [2u(x) - u(x+rho w) - u(x-rho w)] rho^{-1-2s} drho.
PointEvaluation ray_integral(const TestFunction& u, Vec2 x, Vec2 omega, double s, const QuadratureConfig& q);

// (1 - |x|^2)^s_+
double barrier(Vec2 x, double s);
TestFunction barrier_function(double s, Vec2 center = {0.0, 0.0}, double radius = 1.0);
// The constant value of L(barrier) in B_1 for the operator with n axis pairs,
// under unit_symbol normalization: n * Gamma(1 + 2s).
double barrier_constant(double s, int n = 2);

// Half-line weights for unit spacing: the discrete raw operator along a line is
// sum_k W_k (2u_i - u_{i+k} - u_{i-k}), with W_k for spacing h equal to h^{-2s} W_k.
struct DirectionalWeights {
    std::vector<double> w;  // w[k-1] = W_k, k = 1..m
    double tail = 0.0;      // sum_{k>m} W_k
    double total = 0.0;     // sum_{k>=1} W_k
};
DirectionalWeights directional_weights(double s, int m);

// Symmetric Toeplitz band for the discrete unit-spacing operator on a line of up
// to n nodes with zero exterior: T_0 = 2*total, T_k = -W_k; scaled by `scale`.
// Layout: band[n-1+k] = T_|k|.
std::vector<double> line_band(double s, int n, double scale);

// Discrete directional operator c_1 (-d_1^2)^s + c_2 (-d_2^2)^s on the grid, zero exterior.
GridFunction apply_axis_grid(const GridFunction& u, double s, std::array<double, 2> coeffs,
                             Normalization norm = Normalization::unit_symbol, int threads = 1);
// Same with c = (1, 1).
GridFunction apply_RI_grid(const GridFunction& u, double s, Normalization norm = Normalization::unit_symbol,
                           int threads = 1);

}  // namespace afrac
