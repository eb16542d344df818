#pragma once

#include <functional>

namespace afrac::quad {

using Integrand = std::function<double(double)>;

// Double-exponential rule; tolerates integrable algebraic endpoint singularities.
// The integrand is never evaluated at a or b.
double tanh_sinh(const Integrand& f, double a, double b, double rel_tol, double* error = nullptr);

// Adaptive 15-point Gauss-Kronrod with interval bisection up to max_depth.
double gauss_kronrod(const Integrand& f, double a, double b, double rel_tol, unsigned max_depth = 20,
                     double* error = nullptr);

// Integral of rho^{-1-2s} over [a, b] (b may be +inf), a > 0.
double power_kernel_integral(double a, double b, double s);

// Integrals of rho^{-2s} and rho^{1-2s} over [a, b], 0 <= a < b < inf; the
// first uses the logarithm when 2s = 1.
double moment0(double a, double b, double s);
double moment1(double a, double b, double s);

}  // namespace afrac::quad
