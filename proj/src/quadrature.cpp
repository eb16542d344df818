#include "afrac/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>

#include "afrac/error.hpp"

namespace afrac::quad {

double tanh_sinh(const Integrand& f, double a, double b, double rel_tol, double* error) {
    if (!(b > a)) return 0.0;
    thread_local boost::math::quadrature::tanh_sinh<double> rule(12);
    double err = 0.0;
    double l1 = 0.0;
    const double v = rule.integrate(f, a, b, rel_tol, &err, &l1);
    if (error) *error = err;
    return v;
}

double gauss_kronrod(const Integrand& f, double a, double b, double rel_tol, unsigned max_depth,
                     double* error) {
    if (!(b > a)) return 0.0;
    double err = 0.0;
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, rel_tol, &err);
    if (error) *error = err;
    return v;
}

double power_kernel_integral(double a, double b, double s) {
    require(a > 0.0, "power kernel integral needs a positive lower limit");
    if (!(b > a)) return 0.0;
    const double p = 2.0 * s;
    if (std::isinf(b)) return std::pow(a, -p) / p;
    // a^{-p} - b^{-p} = a^{-p} (1 - (a/b)^p), evaluated without cancellation
    return std::pow(a, -p) * -std::expm1(p * std::log(a / b)) / p;
}

double moment0(double a, double b, double s) {
    const double e = 1.0 - 2.0 * s;
    if (std::abs(e) < 1e-14) return std::log(b / a);
    if (a == 0.0) return std::pow(b, e) / e;
    return std::pow(a, e) * std::expm1(e * std::log(b / a)) / e;
}

double moment1(double a, double b, double s) {
    const double e = 2.0 - 2.0 * s;
    return (std::pow(b, e) - std::pow(a, e)) / e;
}

}  // namespace afrac::quad
