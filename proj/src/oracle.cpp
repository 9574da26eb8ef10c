#include "vmfkl/oracle.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "vmfkl/errors.hpp"

namespace vmfkl::oracle {
namespace {

constexpr int kOrder = 20;
constexpr int kMaxDepth = 60;
constexpr double kAbsTol = 1e-10;

struct Rule {
    std::array<double, kOrder> nodes{};
    std::array<double, kOrder> weights{};
};

// Roots of P_n by Newton iteration from the Chebyshev-like initial guess.
Rule make_rule() {
    Rule rule;
    const int n = kOrder;
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[static_cast<std::size_t>(i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const Rule& rule() {
    static const Rule r = make_rule();
    return r;
}

double panel(const std::function<double(double)>& f, double a, double b, std::size_t& evals) {
    const Rule& r = rule();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < kOrder; ++i) {
        s += r.weights[static_cast<std::size_t>(i)] * f(c + h * r.nodes[static_cast<std::size_t>(i)]);
    }
    evals += kOrder;
    return s * h;
}

struct Accum {
    double value = 0.0;
    double error = 0.0;
    std::size_t evals = 0;
};

void bisect(const std::function<double(double)>& f, double a, double b, double whole, double tol,
            int depth, Accum& acc) {
    const double m = 0.5 * (a + b);
    const double left = panel(f, a, m, acc.evals);
    const double right = panel(f, m, b, acc.evals);
    const double diff = std::abs(left + right - whole);
    if (diff <= tol || diff <= 1e-15 * std::abs(whole)) {
        acc.value += left + right;
        acc.error += diff;
        return;
    }
    if (depth >= kMaxDepth) {
        throw QuadratureError("Gauss-Legendre oracle exceeded its bisection depth");
    }
    bisect(f, a, m, left, 0.5 * tol, depth + 1, acc);
    bisect(f, m, b, right, 0.5 * tol, depth + 1, acc);
}

// Breaks around a peak at `centre` of the given width, clipped to [lo, hi].
std::vector<double> peak_breaks(double lo, double hi, double centre, double width) {
    std::vector<double> breaks{lo};
    for (double k : {-16.0, -4.0, 0.0, 4.0, 16.0}) {
        const double b = centre + k * width;
        if (b > breaks.back() && b < hi) breaks.push_back(b);
    }
    breaks.push_back(hi);
    return breaks;
}

}  // namespace

QuadratureResult gauss_legendre_adaptive(const std::function<double(double)>& f,
                                         const std::vector<double>& breaks, double abs_tol) {
    Accum acc;
    if (breaks.size() < 2) return {};
    const double share = abs_tol / static_cast<double>(breaks.size() - 1);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i];
        const double b = breaks[i + 1];
        if (a == b) continue;
        const double whole = panel(f, a, b, acc.evals);
        bisect(f, a, b, whole, share, 0, acc);
    }
    return {acc.value, acc.error, acc.evals};
}

QuadratureResult quad_normalization(const VmfDistribution& dist) {
    const int d = dist.dim();
    if (d < 2 || d > 8) {
        throw UnsupportedDimension("quad_normalization supports 2 <= d <= 8, got " +
                                   std::to_string(d));
    }
    const double kappa = dist.kappa();
    const double log_norm = dist.log_norm();
    const double sin_power = d - 2.0;

    // Polar angle t from mu: surface element |S^{d-2}| sin^{d-2} t dt.
    auto integrand = [=](double t) {
        double g = log_norm + kappa * std::cos(t);
        if (sin_power > 0.0) {
            const double s = std::sin(t);
            if (s <= 0.0) return 0.0;
            g += sin_power * std::log(s);
        }
        return std::exp(g);
    };

    const double half_power = 0.5 * sin_power;
    const double mode = kappa == 0.0 ? 0.5 * std::numbers::pi
                                     : std::acos(kappa / (half_power + std::hypot(half_power, kappa)));
    const auto breaks = peak_breaks(0.0, std::numbers::pi, mode, 1.0 / std::sqrt(kappa + 1.0));
    QuadratureResult r = gauss_legendre_adaptive(integrand, breaks, kAbsTol);
    const double area = stiefel_area(d - 1, 1);
    r.value *= area;
    r.abs_error_estimate *= area;
    return r;
}

QuadratureResult quad_kl(const VmfDistribution& q, const VmfDistribution& p) {
    const int d = q.dim();
    if (p.dim() != d) throw DimensionMismatch("quad_kl: dimension mismatch");
    if (d != 2 && d != 3) {
        throw UnsupportedDimension("quad_kl supports d = 2 or 3, got " + std::to_string(d));
    }

    // Frame with mu_q = e_1 and mu_p = c e_1 + s e_2.
    const double c = std::clamp(p.mu().dot(q.mu()), -1.0, 1.0);
    const double s = std::sqrt((1.0 - c) * (1.0 + c));
    const double kq = q.kappa();
    const double kp = p.kappa();
    const double lq0 = q.log_norm();
    const double lp0 = p.log_norm();
    const double width = 1.0 / std::sqrt(kq + 1.0);

    if (d == 2) {
        // x = (cos t, sin t), t in [-pi, pi].
        auto integrand = [=](double t) {
            const double ct = std::cos(t);
            const double log_q = lq0 + kq * ct;
            const double log_p = lp0 + kp * (c * ct + s * std::sin(t));
            return std::exp(log_q) * (log_q - log_p);
        };
        return gauss_legendre_adaptive(
            integrand, peak_breaks(-std::numbers::pi, std::numbers::pi, 0.0, width), kAbsTol);
    }

    // x = (cos t, sin t cos u, sin t sin u), t in [0, pi], u in [0, 2 pi].
    double worst_inner = 0.0;
    std::size_t inner_evals = 0;
    auto outer = [&](double t) {
        const double ct = std::cos(t);
        const double st = std::sin(t);
        const double log_q = lq0 + kq * ct;
        auto inner = [=](double u) {
            const double log_p = lp0 + kp * (c * ct + s * st * std::cos(u));
            return log_q - log_p;
        };
        const QuadratureResult r =
            gauss_legendre_adaptive(inner, {0.0, std::numbers::pi, 2.0 * std::numbers::pi}, 1e-12);
        worst_inner = std::max(worst_inner, r.abs_error_estimate);
        inner_evals += r.nodes_used;
        return std::exp(log_q) * st * r.value;
    };
    QuadratureResult r =
        gauss_legendre_adaptive(outer, peak_breaks(0.0, std::numbers::pi, 0.0, width), kAbsTol);
    // The outer weight exp(log_q) sin t integrates to 1 / (2 pi).
    r.abs_error_estimate += worst_inner / (2.0 * std::numbers::pi);
    r.nodes_used += inner_evals;
    return r;
}

Certification certify(const std::vector<KlReport>& rows) {
    Certification c;
    std::set<std::pair<int, double>> normalizations;
    for (const auto& row : rows) {
        if (!row.error.empty() || !row.q || !row.p) continue;
        if (row.d <= 3) {
            const double diff = std::abs(quad_kl(*row.q, *row.p).value - row.exact);
            ++c.kl_checked;
            c.kl_worst_abs_diff = std::max(c.kl_worst_abs_diff, diff);
            if (!(diff <= kKlCertifyTolerance)) ++c.kl_failed;
        }
        if (row.d <= 8) {
            normalizations.emplace(row.d, row.kappa_q);
            normalizations.emplace(row.d, row.kappa_p);
        }
    }
    for (const auto& [d, kappa] : normalizations) {
        const double diff =
            std::abs(quad_normalization(VmfDistribution(UnitVector::axis(d, 0), kappa)).value - 1.0);
        ++c.norm_checked;
        c.norm_worst_abs_diff = std::max(c.norm_worst_abs_diff, diff);
        if (!(diff <= kNormCertifyTolerance)) ++c.norm_failed;
    }
    return c;
}

}  // namespace vmfkl::oracle
