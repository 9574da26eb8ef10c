#include <cmath>
#include <numbers>

#include "doctest.h"
#include "vmfkl/divergence.hpp"
#include "vmfkl/errors.hpp"
#include "vmfkl/oracle.hpp"

using namespace vmfkl;

TEST_SUITE("oracle") {

TEST_CASE("Gauss-Legendre rule integrates smooth functions") {
    const auto r = oracle::gauss_legendre_adaptive([](double x) { return std::cos(x); },
                                                   {0.0, std::numbers::pi / 2}, 1e-14);
    CHECK(std::abs(r.value - 1.0) < 1e-14);
    const auto g = oracle::gauss_legendre_adaptive([](double x) { return std::exp(-x * x); },
                                                   {-8.0, 0.0, 8.0}, 1e-14);
    CHECK(std::abs(g.value - std::sqrt(std::numbers::pi)) < 1e-13);
}

TEST_CASE("quad_kl of identical distributions is zero") {
    for (int d : {2, 3}) {
        for (double k : {0.0, 1.0, 25.0}) {
            const VmfDistribution q(UnitVector::axis(d, 0), k);
            CHECK(std::abs(oracle::quad_kl(q, q).value) < 1e-12);
        }
    }
}

TEST_CASE("quad_kl examples agree with the closed form") {
    {
        const auto [q, p] = grid_pair(2, 1.0, 0.0, 1.0);
        const auto r = oracle::quad_kl(q, p);
        CHECK(std::abs(r.value - kl_exact(q, p)) < 1e-8);
        CHECK(r.abs_error_estimate < 1e-9);
    }
    {
        const auto [q, p] = grid_pair(3, 10.0, 3.0, 0.5);
        const auto r = oracle::quad_kl(q, p);
        CHECK(std::abs(r.value - kl_exact(q, p)) < 1e-8);
        CHECK(r.abs_error_estimate < 1e-9);
    }
}

TEST_CASE("quad_kl rejects unsupported dimensions") {
    const VmfDistribution q(UnitVector::axis(4, 0), 1.0);
    CHECK_THROWS_AS(oracle::quad_kl(q, q), UnsupportedDimension);
    const VmfDistribution a(UnitVector::axis(3, 0), 1.0), b(UnitVector::axis(2, 0), 1.0);
    CHECK_THROWS_AS(oracle::quad_kl(a, b), DimensionMismatch);
}

TEST_CASE("quad_normalization examples") {
    for (int d = 2; d <= 8; ++d) {
        for (double k : {0.0, 1.0, 10.0, 100.0}) {
            const auto r = oracle::quad_normalization(VmfDistribution(UnitVector::axis(d, d - 1), k));
            CAPTURE(d);
            CAPTURE(k);
            CHECK(std::abs(r.value - 1.0) < 1e-8);
        }
    }
    CHECK_THROWS_AS(oracle::quad_normalization(VmfDistribution::uniform(9)), UnsupportedDimension);
}

TEST_CASE("certify checks rows the oracle supports") {
    AuditGrid g;
    g.dims = {2, 3, 5};
    g.kappas_q = {1.0, 10.0};
    g.kappas_p = {0.0, 3.0};
    g.cosines = {-1.0, 0.5};
    const auto rows = audit_grid(g, 2);
    const auto c = oracle::certify(rows);
    CHECK(c.passed());
    CHECK(c.kl_checked == 16);
    CHECK(c.norm_checked > 0);
    CHECK(c.kl_worst_abs_diff < 1e-7);

    auto bad = rows;
    bad[0].exact += 1e-3;
    CHECK_FALSE(oracle::certify(bad).passed());
}

}
