#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string_view>

namespace vmfkl {

/// log Gamma(x) for x > 0. Throws DomainError otherwise.
double log_gamma(double x);

/// Upper incomplete gamma Gamma(s, z) at integer shape s >= 1 and z >= 0,
/// from the finite sum (s-1)! e^{-z} sum_{m<s} z^m / m!.
double upper_incomplete_gamma_int(int s, double z);

/// Natural log of upper_incomplete_gamma_int; stays finite where the value
/// itself would overflow or underflow.
double log_upper_incomplete_gamma_int(int s, double z);

enum class BesselBranch { series, quadrature, asymptotic };

std::string_view to_string(BesselBranch branch);

struct LogBesselResult {
    double value;  // log I_alpha(z); -inf when I_alpha(z) == 0
    BesselBranch branch;
    double alpha;
    double z;
};

/// log I_alpha(z), the modified Bessel function of the first kind, for
/// alpha >= 0 and z >= 0.
///
/// Three evaluation paths:
///   - z < max(10, 2 alpha): power series summed in the log domain,
///   - z > max(500, 40 alpha): uniform (Debye) asymptotic expansion,
///   - otherwise: adaptive quadrature of the Poisson integral
///     int_0^pi exp(z cos t) sin^{2 alpha} t dt, shifted by its peak value.
LogBesselResult log_bessel_i(double alpha, double z);

/// Evaluates a specific branch regardless of the crossover rule. Used to
/// check agreement between branches on overlap bands.
double log_bessel_i_via(BesselBranch branch, double alpha, double z);

/// Crossovers used by log_bessel_i.
double bessel_series_limit(double alpha);
double bessel_asymptotic_limit(double alpha);

/// Generalized exponential integral E_alpha(z) = int_1^inf e^{-zt} t^{-alpha} dt.
/// For integer alpha <= 0 this is z^{alpha-1} Gamma(1-alpha, z) using the
/// integer-order incomplete gamma; alpha == 1 is evaluated by quadrature.
/// Throws UnsupportedOrder for alpha >= 2 and DomainError for z <= 0.
double exp_integral_E(int alpha, double z);

/// E_alpha(z) by direct quadrature, for any real alpha and z > 0.
double exp_integral_E_quadrature(double alpha, double z);

struct IdentityAudit {
    double lhs;       // int_{-1}^{1} (1-t)^d e^{kappa t} dt by quadrature
    double rhs;       // -2^{d-1} E_{-d}(2 kappa) e^{kappa}
    double abs_diff;  // |lhs - rhs|
    double rel_diff;  // |lhs - rhs| / |lhs|
};

/// Evaluates both sides of the identity
///   int_{-1}^{1} (1-t)^d e^{t kappa} dt  =  -2^{d-1} E_{-d}(2 kappa) e^{kappa}
/// without asserting that they agree. Non-integer d uses the quadrature
/// form of E. Throws QuadratureError if either integral fails to converge.
IdentityAudit audit_exponential_integral_identity(double d, double kappa);

/// log(sum exp(x_i)) with the running maximum factored out.
template <class Range>
double log_sum_exp(const Range& xs) {
    double peak = -std::numeric_limits<double>::infinity();
    for (double x : xs) peak = std::max(peak, x);
    if (!std::isfinite(peak)) return peak;
    double sum = 0.0;
    for (double x : xs) sum += std::exp(x - peak);
    return peak + std::log(sum);
}

}  // namespace vmfkl
