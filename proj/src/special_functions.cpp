#include "vmfkl/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "vmfkl/errors.hpp"
#include "vmfkl/quadrature.hpp"

namespace vmfkl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Series stops once a term is this many nats below the running log-sum.
constexpr double kSeriesCutoffNats = 40.0;
constexpr int kSeriesMaxTerms = 500;

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

double log_add_exp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(-std::abs(a - b)));
}

double log_bessel_series(double alpha, double z) {
    if (z == 0.0) return alpha == 0.0 ? 0.0 : -kInf;
    const double log_half_z = std::log(0.5 * z);
    const double log_ratio = 2.0 * log_half_z;

    std::vector<double> log_terms;
    log_terms.reserve(64);
    double log_term = alpha * log_half_z - log_gamma(alpha + 1.0);
    double running = -kInf;
    for (int m = 0; m < kSeriesMaxTerms; ++m) {
        log_terms.push_back(log_term);
        running = log_add_exp(running, log_term);
        if (m > 0 && log_term < running - kSeriesCutoffNats) break;
        log_term += log_ratio - std::log(m + 1.0) - std::log(m + alpha + 1.0);
    }

    // Kahan-compensated sum of the terms scaled by the largest one.
    double peak = -kInf;
    for (double lt : log_terms) peak = std::max(peak, lt);
    double sum = 0.0;
    double carry = 0.0;
    for (double lt : log_terms) {
        const double y = std::exp(lt - peak) - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return peak + std::log(sum);
}

double log_bessel_quadrature(double alpha, double z) {
    if (z == 0.0) return log_bessel_series(alpha, z);
    // Mode of z cos(t) + 2 alpha log sin(t) on [0, pi]:  cos(t*) = z / (alpha + sqrt(alpha^2 + z^2)).
    const double root = std::hypot(alpha, z);
    const double cos_peak = z / (alpha + root);
    const double theta_peak = std::acos(cos_peak);
    const double sin2_peak = (1.0 - cos_peak) * (1.0 + cos_peak);
    const double log_peak =
        z * cos_peak + (alpha == 0.0 ? 0.0 : alpha * std::log(sin2_peak));

    auto shifted = [alpha, z, log_peak](double t) {
        double g = z * std::cos(t) - log_peak;
        if (alpha != 0.0) {
            const double s = std::sin(t);
            if (s <= 0.0) return 0.0;
            g += 2.0 * alpha * std::log(s);
        }
        return std::exp(g);
    };

    // The peak is roughly 1/sqrt(z) wide; put a break on either side of it.
    const double width = 1.0 / std::sqrt(z + alpha);
    std::vector<double> breaks{0.0};
    for (double b : {theta_peak - 8.0 * width, theta_peak, theta_peak + 8.0 * width}) {
        if (b > breaks.back() && b < std::numbers::pi) breaks.push_back(b);
    }
    breaks.push_back(std::numbers::pi);

    QuadratureOptions opts;
    opts.abs_tol = 1e-300;
    opts.rel_tol = 1e-14;
    const QuadratureResult r = integrate_panels(shifted, breaks, opts);

    return alpha * std::log(0.5 * z) - 0.5 * std::log(std::numbers::pi) -
           log_gamma(alpha + 0.5) + log_peak + std::log(r.value);
}

// Debye's uniform expansion written in terms of R = sqrt(alpha^2 + z^2) so it
// stays finite at alpha = 0, where it reduces to the Hankel large-z series.
double log_bessel_asymptotic(double alpha, double z) {
    if (z == 0.0) return log_bessel_series(alpha, z);
    const double r = std::hypot(alpha, z);
    const double p2 = (alpha / r) * (alpha / r);

    // u_k(p) / p^k as polynomials in p^2.
    const std::array<double, 5> u = {
        1.0,
        (3.0 - 5.0 * p2) / 24.0,
        (81.0 + p2 * (-462.0 + p2 * 385.0)) / 1152.0,
        (30375.0 + p2 * (-369603.0 + p2 * (765765.0 - p2 * 425425.0))) / 414720.0,
        (4465125.0 +
         p2 * (-94121676.0 + p2 * (349922430.0 + p2 * (-446185740.0 + p2 * 185910725.0)))) /
            39813120.0,
    };
    double sum = 0.0;
    double r_pow = 1.0;
    for (double uk : u) {
        sum += uk / r_pow;
        r_pow *= r;
    }

    const double exponent = r + (alpha == 0.0 ? 0.0 : alpha * std::log(z / (alpha + r)));
    return exponent - 0.5 * std::log(2.0 * std::numbers::pi * r) + std::log(sum);
}

}  // namespace

double log_gamma(double x) {
    require(x > 0.0 && std::isfinite(x), "log_gamma: argument must be positive and finite");
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

double log_upper_incomplete_gamma_int(int s, double z) {
    require(s >= 1, "upper_incomplete_gamma_int: shape must be a positive integer");
    require(z >= 0.0 && std::isfinite(z), "upper_incomplete_gamma_int: argument must be >= 0");
    if (z == 0.0) return log_gamma(static_cast<double>(s));
    // log sum_{m<s} z^m / m!
    std::vector<double> log_terms(static_cast<std::size_t>(s));
    const double log_z = std::log(z);
    double log_term = 0.0;
    for (int m = 0; m < s; ++m) {
        log_terms[static_cast<std::size_t>(m)] = log_term;
        log_term += log_z - std::log(m + 1.0);
    }
    return log_gamma(static_cast<double>(s)) - z + log_sum_exp(log_terms);
}

double upper_incomplete_gamma_int(int s, double z) {
    return std::exp(log_upper_incomplete_gamma_int(s, z));
}

std::string_view to_string(BesselBranch branch) {
    switch (branch) {
        case BesselBranch::series: return "series";
        case BesselBranch::quadrature: return "quadrature";
        case BesselBranch::asymptotic: return "asymptotic";
    }
    return "unknown";
}

double bessel_series_limit(double alpha) { return std::max(10.0, 2.0 * alpha); }
double bessel_asymptotic_limit(double alpha) { return std::max(500.0, 40.0 * alpha); }

double log_bessel_i_via(BesselBranch branch, double alpha, double z) {
    require(alpha >= 0.0 && std::isfinite(alpha), "log_bessel_i: order must be >= 0");
    require(z >= 0.0 && !std::isnan(z), "log_bessel_i: argument must be >= 0");
    if (std::isinf(z)) return kInf;
    switch (branch) {
        case BesselBranch::series: return log_bessel_series(alpha, z);
        case BesselBranch::quadrature: return log_bessel_quadrature(alpha, z);
        case BesselBranch::asymptotic: return log_bessel_asymptotic(alpha, z);
    }
    return std::nan("");
}

LogBesselResult log_bessel_i(double alpha, double z) {
    require(alpha >= 0.0 && std::isfinite(alpha), "log_bessel_i: order must be >= 0");
    require(z >= 0.0 && !std::isnan(z), "log_bessel_i: argument must be >= 0");
    BesselBranch branch = BesselBranch::quadrature;
    if (z < bessel_series_limit(alpha)) {
        branch = BesselBranch::series;
    } else if (z > bessel_asymptotic_limit(alpha)) {
        branch = BesselBranch::asymptotic;
    }
    return {log_bessel_i_via(branch, alpha, z), branch, alpha, z};
}

double exp_integral_E_quadrature(double alpha, double z) {
    require(z > 0.0 && std::isfinite(z), "exp_integral_E: argument must be positive");
    require(std::isfinite(alpha), "exp_integral_E: order must be finite");
    // e^{-z} int_1^inf e^{-z(t-1)} t^{-alpha} dt
    auto f = [alpha, z](double t) { return std::exp(-z * (t - 1.0) - alpha * std::log(t)); };
    QuadratureOptions opts;
    opts.abs_tol = 0.0;
    opts.rel_tol = 1e-13;
    const QuadratureResult r = integrate_to_infinity(f, 1.0, opts);
    return std::exp(-z) * r.value;
}

double exp_integral_E(int alpha, double z) {
    require(z > 0.0 && std::isfinite(z), "exp_integral_E: argument must be positive");
    if (alpha == 1) return exp_integral_E_quadrature(1.0, z);
    if (alpha > 1) {
        throw UnsupportedOrder("exp_integral_E: order " + std::to_string(alpha) +
                               " is not supported (orders <= 1 only)");
    }
    return std::exp((alpha - 1.0) * std::log(z) + log_upper_incomplete_gamma_int(1 - alpha, z));
}

IdentityAudit audit_exponential_integral_identity(double d, double kappa) {
    require(d > 0.0 && std::isfinite(d), "identity audit: d must be positive");
    require(kappa > 0.0 && std::isfinite(kappa), "identity audit: kappa must be positive");

    auto integrand = [d, kappa](double t) { return std::pow(1.0 - t, d) * std::exp(t * kappa); };
    QuadratureOptions opts;
    opts.abs_tol = 1e-14;
    opts.rel_tol = 1e-13;
    const double lhs = integrate(integrand, -1.0, 1.0, opts).value;

    double e_value = 0.0;
    if (d == std::round(d) && d < 1e6) {
        e_value = exp_integral_E(-static_cast<int>(d), 2.0 * kappa);
    } else {
        e_value = exp_integral_E_quadrature(-d, 2.0 * kappa);
    }
    const double rhs = -std::pow(2.0, d - 1.0) * e_value * std::exp(kappa);

    const double abs_diff = std::abs(lhs - rhs);
    return {lhs, rhs, abs_diff, abs_diff / std::abs(lhs)};
}

}  // namespace vmfkl
