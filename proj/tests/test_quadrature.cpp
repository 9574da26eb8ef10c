#include <cmath>
#include <numbers>

#include "doctest.h"
#include "vmfkl/errors.hpp"
#include "vmfkl/quadrature.hpp"

using namespace vmfkl;

TEST_SUITE("quadrature") {

TEST_CASE("polynomials and smooth functions") {
    const auto r = integrate([](double x) { return x * x; }, 0.0, 3.0);
    CHECK(r.value == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(r.nodes_used >= 21);

    const auto s = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    CHECK(std::abs(s.value - 2.0) < 1e-13);
    CHECK(s.abs_error_estimate >= 0.0);
}

TEST_CASE("reversed and empty intervals") {
    CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0).value == 0.0);
    const auto r = integrate([](double x) { return x; }, 1.0, 0.0);
    CHECK(r.value == doctest::Approx(-0.5));
}

TEST_CASE("sharp peak split into panels") {
    auto gauss = [](double x) { return std::exp(-0.5 * x * x / 1e-6); };
    QuadratureOptions opts;
    opts.rel_tol = 1e-12;
    const auto r = integrate_panels(gauss, {-1.0, 0.0, 1.0}, opts);
    CHECK(std::abs(r.value - std::sqrt(2.0 * std::numbers::pi * 1e-6)) < 1e-14);
}

TEST_CASE("semi-infinite interval") {
    QuadratureOptions opts;
    opts.rel_tol = 1e-13;
    const auto r = integrate_to_infinity([](double t) { return std::exp(-t); }, 2.0, opts);
    CHECK(std::abs(r.value / std::exp(-2.0) - 1.0) < 1e-12);
    const auto g = integrate_to_infinity([](double u) { return 2.0 * std::exp(-u * u); }, 0.0, opts);
    CHECK(std::abs(g.value - std::sqrt(std::numbers::pi)) < 1e-12);
}

TEST_CASE("non-convergence is reported") {
    QuadratureOptions opts;
    opts.max_intervals = 5;
    opts.rel_tol = 1e-15;
    opts.abs_tol = 0.0;
    auto nasty = [](double x) { return std::sin(1.0 / (x + 1e-4)); };
    CHECK_THROWS_AS(integrate(nasty, 0.0, 1.0, opts), QuadratureError);
}

}
