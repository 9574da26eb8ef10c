#pragma once

// Reference values computed independently of the library: 50-digit
// arithmetic for Bessel closed forms and power series, and direct
// transcriptions of the published closed-form expressions.

#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace reference {

using Real = boost::multiprecision::cpp_bin_float_50;

// log I_{n+1/2}(z) for n = 0, 1, 2 from the elementary closed forms.
inline double log_bessel_half_integer(int n, double z_in) {
    const Real z = z_in;
    const Real pi = boost::math::constants::pi<Real>();
    const Real pre = sqrt(Real(2) / (pi * z));
    const Real sh = sinh(z);
    const Real ch = cosh(z);
    Real v;
    switch (n) {
        case 0: v = pre * sh; break;
        case 1: v = pre * (ch - sh / z); break;
        case 2: v = pre * ((1 + 3 / (z * z)) * sh - 3 * ch / z); break;
        default: throw std::invalid_argument("half-integer order out of range");
    }
    return static_cast<double>(log(v));
}

// log of the first `terms` terms of sum (z/2)^{2m+alpha} / (m! Gamma(m+alpha+1)).
inline double log_bessel_series(double alpha_in, double z_in, int terms) {
    const Real alpha = alpha_in;
    const Real half_z = Real(z_in) / 2;
    Real sum = 0;
    for (int m = 0; m < terms; ++m) {
        sum += pow(half_z, 2 * m + alpha) / (boost::math::tgamma(Real(m + 1)) *
                                             boost::math::tgamma(Real(m) + alpha + 1));
    }
    return static_cast<double>(log(sum));
}

// The closed-form upper-bound expression, transcribed term by term with
// factorials from tgamma and powers from pow. d must be odd.
inline double theorem1_expression(int d, double kq, double kp, double cos_pq) {
    const double dd = (d - 3) / 2.0;
    const double db = (d - 1) / 2.0;
    double partial = 0.0;
    for (int m = 1; m <= static_cast<int>(dd); ++m) partial += std::pow(kq, m) / std::tgamma(m + 1.0);
    const double dd_log = dd == 0.0 ? 0.0 : dd * (dd + 1.0) * std::log(dd);
    return kq - kp * cos_pq + db * std::log(kq) + partial -
           ((std::pow(d, 2) - 2.0 * d + 1.0) / 4.0) * std::log(kp) + dd_log - std::pow(dd, 2) + 1.0;
}

inline double corollary_expression(int d, double kq) { return kq - (d / 2.0 - 1.0) * std::log(2.0); }

// d = 3 closed forms: A_3(k) = coth k - 1/k and c_3(k) = k / (4 pi sinh k).
inline double mean_resultant_length_d3(double k) { return 1.0 / std::tanh(k) - 1.0 / k; }
inline double log_norm_d3(double k) {
    // log sinh k = k + log1p(-e^{-2k}) - log 2
    return std::log(k) - std::log(4.0 * M_PI) - (k + std::log1p(-std::exp(-2.0 * k)) - std::log(2.0));
}

// log n! as an exact-order sum of logs (0 for n = 0, 1).
inline double log_factorial(int n) {
    double s = 0.0;
    for (int k = 2; k <= n; ++k) s += std::log(static_cast<double>(k));
    return s;
}

}  // namespace reference
