#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace vmfkl {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t nodes_used = 0;
};

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    std::size_t max_intervals = 4000;
};

using Integrand = std::function<double(double)>;

// Globally adaptive Gauss-Kronrod (10/21 point) integration over [a, b].
// The interval with the largest error estimate is bisected until the total
// error estimate is below max(abs_tol, rel_tol * |value|).
// Throws QuadratureError when max_intervals is exhausted.
QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureOptions& opts = {});

// Same as integrate() but over the union of consecutive panels
// [breaks[0], breaks[1]], [breaks[1], breaks[2]], ...  Useful when the
// integrand has a sharp interior peak at a known location.
QuadratureResult integrate_panels(const Integrand& f, const std::vector<double>& breaks,
                                  const QuadratureOptions& opts = {});

// Integral over [a, inf) via the map t = a + (1 - u) / u, u in (0, 1].
QuadratureResult integrate_to_infinity(const Integrand& f, double a,
                                       const QuadratureOptions& opts = {});

}  // namespace vmfkl
