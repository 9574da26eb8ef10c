#pragma once

#include <functional>
#include <vector>

#include "vmfkl/divergence.hpp"
#include "vmfkl/quadrature.hpp"
#include "vmfkl/vmf.hpp"

// Brute-force reference values used to certify the closed-form paths. The
// integrator here (Gauss-Legendre panels with bisection) shares no code with
// the Gauss-Kronrod integrator behind the special functions.
namespace vmfkl::oracle {

/// 20-point Gauss-Legendre on each panel of `breaks`; a panel is bisected
/// until its two halves agree with the whole to within its share of abs_tol.
/// Throws QuadratureError past 60 levels of bisection.
QuadratureResult gauss_legendre_adaptive(const std::function<double(double)>& f,
                                         const std::vector<double>& breaks, double abs_tol);

/// Integral of exp(log_pdf) over S^{d-1} for d in 2..8, reduced to one
/// dimension in the polar angle from mu.
QuadratureResult quad_normalization(const VmfDistribution& dist);

/// KL(q || p) as an explicit integral over the circle (d = 2) or the sphere
/// (d = 3, nested polar/azimuthal quadrature). Throws UnsupportedDimension
/// for other d.
QuadratureResult quad_kl(const VmfDistribution& q, const VmfDistribution& p);

inline constexpr double kKlCertifyTolerance = 1e-7;
inline constexpr double kNormCertifyTolerance = 1e-8;

struct Certification {
    std::size_t kl_checked = 0;
    std::size_t kl_failed = 0;
    double kl_worst_abs_diff = 0.0;
    std::size_t norm_checked = 0;
    std::size_t norm_failed = 0;
    double norm_worst_abs_diff = 0.0;

    bool passed() const { return kl_failed == 0 && norm_failed == 0; }
};

/// Checks every evaluated row with d <= 3 against quad_kl (|diff| <= 1e-7)
/// and every distinct (d <= 8, kappa) appearing in the rows against
/// quad_normalization (|value - 1| <= 1e-8).
Certification certify(const std::vector<KlReport>& rows);

}  // namespace vmfkl::oracle
