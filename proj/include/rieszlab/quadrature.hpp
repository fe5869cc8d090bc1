#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace rieszlab {

/// Adaptive Simpson rule on [a, b] to the given absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 40);

/// Composite Gauss-Legendre (16-point panels) for smooth integrands.
double gauss_panels(const std::function<double(double)>& f, double a, double b, int panels);

}  // namespace rieszlab
