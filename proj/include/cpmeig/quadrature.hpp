#pragma once

#include <cmath>
#include <functional>

namespace cpmeig {

/// Adaptive Simpson quadrature of f over [a, b] to the given relative
/// tolerance.  Plain recursive bisection with the usual 1/15 error estimate.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-12);

} // namespace cpmeig
