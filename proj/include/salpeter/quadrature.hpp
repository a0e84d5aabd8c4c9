#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace salpeter {

/// Adaptive 15-point Gauss-Kronrod integral of a real function on [a, b]
/// (either limit may be infinite). Throws QuadratureError when the error
/// estimate stays above both abs_tol and 1e-10 |value|.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-10,
                          unsigned max_depth = 15)
{
    using boost::math::quadrature::gauss_kronrod;
    double error = 0.0;
    const double value =
        gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, 1e-12, &error);
    if (!std::isfinite(value) || error > std::max(abs_tol, 1e-10 * std::abs(value)))
        throw QuadratureError("integrate_adaptive: error estimate " + format_number(error) +
                                  " above tolerance " + format_number(abs_tol),
                              error);
    return value;
}

/// Fixed 15-point Kronrod rule on [a, b]; for short, smooth panels.
template <class F>
double integrate_panel(F&& f, double a, double b)
{
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0);
}

} // namespace salpeter
