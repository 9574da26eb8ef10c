#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "reference.hpp"
#include "vmfkl/errors.hpp"
#include "vmfkl/quadrature.hpp"
#include "vmfkl/special_functions.hpp"
#include "vmfkl/vmf.hpp"

using namespace vmfkl;

namespace {

constexpr double kPi = std::numbers::pi;

double norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

// Kolmogorov-Smirnov distance between the sampled cosines w = mu.x and
// their density, proportional to sin^{d-2}(t) e^{kappa cos t} in t = acos w.
// The CDF is accumulated with one 5-point Gauss-Legendre panel per gap
// between consecutive sorted samples.
double ks_distance(std::vector<double> w, int d, double kappa) {
    std::sort(w.begin(), w.end());
    static const double nodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                    0.5384693101056831, 0.9061798459386640};
    static const double weights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                      0.4786286704993665, 0.2369268850561891};
    auto density = [d, kappa](double t) {
        return std::exp(kappa * (std::cos(t) - 1.0)) * std::pow(std::sin(t), d - 2.0);
    };
    auto panel = [&](double a, double b) {
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        double s = 0.0;
        for (int i = 0; i < 5; ++i) s += weights[i] * density(c + h * nodes[i]);
        return s * h;
    };
    // Angles descend as w ascends.
    std::vector<double> cumulative(w.size());
    double acc = 0.0;
    double t_prev = kPi;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double t = std::acos(std::clamp(w[i], -1.0, 1.0));
        acc += panel(t, t_prev);
        cumulative[i] = acc;
        t_prev = t;
    }
    const double total = acc + panel(0.0, t_prev);
    const double n = static_cast<double>(w.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double f = cumulative[i] / total;
        worst = std::max({worst, std::abs(f - i / n), std::abs(f - (i + 1) / n)});
    }
    return worst;
}

}  // namespace

TEST_SUITE("vmf") {

TEST_CASE("UnitVector normalizes and validates") {
    const UnitVector u({3.0, 4.0});
    CHECK(std::abs(norm(u.coords()) - 1.0) <= 1e-12);
    CHECK(u[0] == doctest::Approx(0.6));
    CHECK(u.dim() == 2);

    const UnitVector tiny({1e-9, 0.0, 1e-9});
    CHECK(std::abs(norm(tiny.coords()) - 1.0) <= 1e-12);

    CHECK_THROWS_AS(UnitVector({0.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(UnitVector({1e-13, 0.0}), DomainError);
    CHECK_THROWS_AS(UnitVector({1.0}), DomainError);
    CHECK_THROWS_AS(UnitVector({1.0, NAN}), DomainError);
    CHECK_THROWS_AS(UnitVector::axis(3, 0).dot(UnitVector::axis(2, 0)), DimensionMismatch);

    const UnitVector p = UnitVector({0.0, 1.0}).padded();
    CHECK(p.dim() == 3);
    CHECK(p[2] == 0.0);
}

TEST_CASE("log_norm_const examples") {
    CHECK(std::abs(log_norm_const(3, 0.0) - std::log(1.0 / (4.0 * kPi))) < 1e-14);
    CHECK(std::abs(log_norm_const(2, 0.0) - std::log(1.0 / (2.0 * kPi))) < 1e-14);
    const double want = 0.5 * std::log(5.0) - 1.5 * std::log(2.0 * kPi) -
                        reference::log_bessel_half_integer(0, 5.0);
    CHECK(std::abs(log_norm_const(3, 5.0) - want) < 1e-13);
    CHECK(std::abs(log_norm_const(3, 5.0) - reference::log_norm_d3(5.0)) < 1e-13);
    CHECK_THROWS_AS(log_norm_const(1, 1.0), DomainError);
    CHECK_THROWS_AS(log_norm_const(3, -1.0), DomainError);
}

TEST_CASE("log_norm_const uniform limit") {
    for (int d = 2; d <= 8; ++d) {
        CAPTURE(d);
        CHECK(std::abs(log_norm_const(d, 1e-8) - log_norm_const(d, 0.0)) <= 1e-6);
        CHECK(std::abs(log_norm_const(d, 1e-6) - log_norm_const(d, 0.0)) <= 1e-6);
    }
}

TEST_CASE("VmfDistribution caches its normalizer and derived indices") {
    const VmfDistribution v(UnitVector({0.0, 0.0, 2.0}), 4.0);
    CHECK(v.log_norm() == log_norm_const(3, 4.0));
    CHECK(v.d_star() == 0.5);
    CHECK(v.d_diamond() == 0.0);
    CHECK(v.d_bullet() == 1.0);
    CHECK(VmfDistribution::uniform(4).is_uniform());
    CHECK_THROWS_AS(VmfDistribution(UnitVector::axis(3, 0), -0.1), DomainError);
    CHECK_THROWS_AS(VmfDistribution(UnitVector::axis(3, 0), INFINITY), DomainError);
}

TEST_CASE("log_pdf examples") {
    const VmfDistribution uniform3 = VmfDistribution::uniform(3);
    CHECK(std::abs(log_pdf(uniform3, UnitVector({0.3, -0.2, 0.9})) - std::log(1.0 / (4.0 * kPi))) < 1e-14);

    const UnitVector mu({1.0, 2.0, 2.0});
    const VmfDistribution q(mu, 2.0);
    CHECK(std::abs(log_pdf(q, mu) - (log_norm_const(3, 2.0) + 2.0)) < 1e-14);

    const VmfDistribution circ(UnitVector::axis(2, 0), 1.0);
    CHECK(log_pdf(circ, UnitVector::axis(2, 1)) == log_norm_const(2, 1.0));
    CHECK_THROWS_AS(log_pdf(circ, UnitVector::axis(3, 1)), DimensionMismatch);
}

TEST_CASE("mean_resultant_length") {
    for (int d = 2; d <= 9; ++d) CHECK(mean_resultant_length(d, 0.0) == 0.0);
    CHECK(std::abs(mean_resultant_length(3, 2.0) - reference::mean_resultant_length_d3(2.0)) < 1e-13);
    const double a = mean_resultant_length(5, 50.0);
    CHECK(a > 0.95);
    CHECK(a < 1.0);
    CHECK(std::abs(a - (1.0 - 4.0 / 100.0)) < 1e-3);
    for (double k : {1e-6, 0.3, 4.0, 80.0, 600.0}) {
        const double v = mean_resultant_length(4, k);
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("stiefel_area") {
    CHECK(std::abs(stiefel_area(2, 1) - 2.0 * kPi) < 1e-14);
    CHECK(std::abs(stiefel_area(3, 1) - 4.0 * kPi) < 1e-13);
    CHECK(std::abs(stiefel_area(3, 1) - 2.0 * std::pow(kPi, 1.5) / std::tgamma(1.5)) < 1e-13);
    CHECK(std::abs(stiefel_area(4, 1) - 2.0 * kPi * kPi) < 1e-13);
    CHECK(std::abs(stiefel_area(1, 1) - 2.0) < 1e-15);
    // tau(3,2) = |S^2| |S^1|
    CHECK(std::abs(stiefel_area(3, 2) - 8.0 * kPi * kPi) < 1e-12);
    for (int d = 2; d <= 12; ++d) {
        CHECK(std::abs(stiefel_area(d, 1) * std::exp(log_norm_const(d, 0.0)) - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(stiefel_area(3, 0), DomainError);
    CHECK_THROWS_AS(stiefel_area(3, 4), DomainError);
}

TEST_CASE("density integrates to one") {
    for (int d : {2, 3, 5}) {
        for (double kappa : {0.0, 1.0, 10.0}) {
            const VmfDistribution v(UnitVector::axis(d, 0), kappa);
            // Polar angle t: |S^{d-2}| sin^{d-2} t dt, i.e. w = cos t with weight (1-w^2)^{(d-3)/2}.
            auto f = [&](double t) {
                return std::exp(v.log_norm() + kappa * std::cos(t)) * std::pow(std::sin(t), d - 2);
            };
            QuadratureOptions opts;
            opts.rel_tol = 1e-13;
            const double total = integrate(f, 0.0, kPi, opts).value * stiefel_area(d - 1, 1);
            CAPTURE(d);
            CAPTURE(kappa);
            CHECK(std::abs(total - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("sampler examples") {
    {
        const SampleBatch b = sample(VmfDistribution::uniform(3), 100000, 1);
        const BatchSummary s = summarize(b.points, b.params.mu());
        CHECK(s.resultant_length <= 0.02);
    }
    {
        const VmfDistribution v(UnitVector({1.0, -1.0, 0.5}), 10.0);
        const SampleBatch b = sample(v, 100000, 2);
        const BatchSummary s = summarize(b.points, v.mu());
        CHECK(std::abs(s.mean_cosine - reference::mean_resultant_length_d3(10.0)) < 0.005);
        CHECK(std::abs(s.mean_cosine - mean_resultant_length(3, 10.0)) < 0.005);
    }
    {
        const VmfDistribution v(UnitVector::axis(5, 3), 1.0);
        const SampleBatch b = sample(v, 100000, 3);
        double sum_log_pdf = 0.0, sum_cos = 0.0;
        for (const auto& x : b.points) {
            sum_log_pdf += log_pdf(v, x) - v.log_norm();
            sum_cos += v.mu().dot(x);
        }
        CHECK(std::abs(sum_log_pdf / 1e5 - v.kappa() * sum_cos / 1e5) < 1e-12);
    }
}

TEST_CASE("sampled points are unit vectors of the right dimension") {
    for (int d : {2, 3, 6}) {
        const SampleBatch b = sample(VmfDistribution(UnitVector::axis(d, d - 1), 30.0), 5000, 9);
        CHECK(b.points.size() == 5000);
        CHECK(b.n == 5000);
        CHECK(b.seed == 9);
        for (const auto& p : b.points) {
            REQUIRE(p.dim() == d);
            REQUIRE(std::abs(norm(p.coords()) - 1.0) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(sample(VmfDistribution::uniform(3), 0, 1), DomainError);
}

TEST_CASE("cosine distribution passes a Kolmogorov-Smirnov test") {
    // Critical value at significance 1e-3: sqrt(-log(0.0005) / 2) / sqrt(n).
    const std::size_t n = 100000;
    const double critical = std::sqrt(-std::log(0.0005) / 2.0) / std::sqrt(static_cast<double>(n));
    const std::vector<std::pair<int, double>> grid = {{2, 0.0}, {2, 5.0}, {3, 1.0},
                                                      {3, 50.0}, {5, 10.0}, {10, 2.0}};
    std::uint64_t seed = 100;
    for (const auto& [d, kappa] : grid) {
        const VmfDistribution v(UnitVector::axis(d, 0), kappa);
        std::vector<double> w;
        w.reserve(n);
        generate(v, n, seed++, [&](std::span<const double> x) { w.push_back(x[0]); });
        const double dist = ks_distance(std::move(w), d, kappa);
        CAPTURE(d);
        CAPTURE(kappa);
        CHECK(dist < critical);
    }
}

TEST_CASE("sampling is deterministic and chunk-parallel safe") {
    const VmfDistribution v(UnitVector({0.2, 0.4, -0.1, 0.9}), 3.0);
    const SampleBatch a = sample(v, 10000, 77);
    const SampleBatch b = sample(v, 10000, 77);
    const SampleBatch c = sample_parallel(v, 10000, 77, 4);
    const SampleBatch other = sample(v, 10000, 78);
    CHECK(a.points == b.points);
    CHECK(a.points == c.points);
    CHECK_FALSE(a.points == other.points);

    std::size_t i = 0;
    bool same = true;
    generate(v, 10000, 77, [&](std::span<const double> x) {
        for (std::size_t j = 0; j < x.size(); ++j) same = same && std::abs(x[j] - a.points[i][j]) < 1e-14;
        ++i;
    });
    CHECK(same);
    CHECK(i == 10000);
}

TEST_CASE("derive_seed spreads indices") {
    CHECK(derive_seed(0, 0) != derive_seed(0, 1));
    CHECK(derive_seed(1, 0) != derive_seed(0, 0));
    CHECK(derive_seed(5, 3) == derive_seed(5, 3));
}

TEST_CASE("summarize") {
    const std::vector<UnitVector> pts = {UnitVector::axis(2, 0), UnitVector::axis(2, 0)};
    const BatchSummary s = summarize(pts, UnitVector::axis(2, 0));
    CHECK(s.n == 2);
    CHECK(s.resultant_length == doctest::Approx(1.0));
    CHECK(s.mean_cosine == doctest::Approx(1.0));
    CHECK(s.circular_std == doctest::Approx(0.0));
}

}
