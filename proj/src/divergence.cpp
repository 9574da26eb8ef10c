#include "vmfkl/divergence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "vmfkl/errors.hpp"

namespace vmfkl {
namespace {

void check_same_dim(const VmfDistribution& q, const VmfDistribution& p) {
    if (q.dim() != p.dim()) {
        throw DimensionMismatch("KL between distributions on S^" + std::to_string(q.dim() - 1) +
                                " and S^" + std::to_string(p.dim() - 1));
    }
}

}  // namespace

double kl_exact(const VmfDistribution& q, const VmfDistribution& p) {
    check_same_dim(q, p);
    const double cos_pq = p.mu().dot(q.mu());
    const double a_q = mean_resultant_length(q.dim(), q.kappa());
    return q.log_norm() - p.log_norm() + (q.kappa() - p.kappa() * cos_pq) * a_q;
}

Theorem1Bound kl_bound_theorem1(const VmfDistribution& q, const VmfDistribution& p) {
    check_same_dim(q, p);
    const double kq = q.kappa();
    const double kp = p.kappa();
    if (!(kq > 0.0) || !(kp > 0.0)) {
        throw DomainError("the bound needs kappa_q > 0 and kappa_p > 0 (it takes log kappa)");
    }

    Theorem1Bound out{0.0, std::nullopt};
    int d = q.dim();
    double cos_pq = 0.0;
    if (d % 2 == 0) {
        ++d;
        out.padded_dim = d;
        cos_pq = p.mu().padded().dot(q.mu().padded());
    } else {
        cos_pq = p.mu().dot(q.mu());
    }

    const int diamond = (d - 3) / 2;
    const double bullet = (d - 1) / 2.0;

    double partial_exp = 0.0;
    double term = 1.0;
    for (int m = 1; m <= diamond; ++m) {
        term *= kq / m;
        partial_exp += term;
    }
    const double diamond_log = diamond > 0 ? diamond * (diamond + 1.0) * std::log(diamond) : 0.0;
    const double kp_coeff = (static_cast<double>(d) * d - 2.0 * d + 1.0) / 4.0;

    out.bound = kq - kp * cos_pq + bullet * std::log(kq) + partial_exp - kp_coeff * std::log(kp) +
                diamond_log - static_cast<double>(diamond) * diamond + 1.0;
    return out;
}

double kl_uniform_prior_corollary(const VmfDistribution& q) {
    return q.kappa() - q.d_star() * std::numbers::ln2;
}

double kl_exact_to_uniform(const VmfDistribution& q) {
    const int d = q.dim();
    return q.kappa() * mean_resultant_length(d, q.kappa()) + q.log_norm() + log_stiefel_area(d, 1);
}

McEstimate mc_kl_estimate(const VmfDistribution& q, const VmfDistribution& p, std::size_t n,
                          std::uint64_t seed) {
    check_same_dim(q, p);
    if (n < 2) throw DomainError("mc_kl_estimate: need at least 2 samples");

    // Welford running mean / variance.
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;
    generate(q, n, seed, [&](std::span<const double> x) {
        const double f = log_pdf(q, x) - log_pdf(p, x);
        ++count;
        const double delta = f - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (f - mean);
    });
    const double var = m2 / static_cast<double>(count - 1);
    return {mean, std::sqrt(var / static_cast<double>(count))};
}

bool KlReport::has_flag(const std::string& f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

KlReport make_report(const VmfDistribution& q, const VmfDistribution& p, std::size_t n_mc,
                     std::uint64_t seed) {
    check_same_dim(q, p);
    KlReport r;
    r.d = q.dim();
    r.kappa_q = q.kappa();
    r.kappa_p = p.kappa();
    r.cos_theta = p.mu().dot(q.mu());
    r.q = q;
    r.p = p;

    r.exact = kl_exact(q, p);
    if (q.kappa() > 0.0 && p.kappa() > 0.0) {
        const Theorem1Bound b = kl_bound_theorem1(q, p);
        r.theorem1_bound = b.bound;
        r.padded_dim = b.padded_dim;
    }
    if (p.is_uniform()) {
        r.corollary_value = kl_uniform_prior_corollary(q);
        r.exact_to_uniform = kl_exact_to_uniform(q);
    }
    if (n_mc >= 2) {
        const McEstimate mc = mc_kl_estimate(q, p, n_mc, seed);
        r.mc_estimate = mc.estimate;
        r.mc_stderr = mc.std_error;
    }

    if (r.theorem1_bound) {
        const double slack = r.mc_stderr ? 3.0 * *r.mc_stderr : 0.0;
        if (*r.theorem1_bound < r.exact - slack) r.flags.emplace_back(flags::kBoundBelowExact);
    }
    if (r.corollary_value &&
        std::abs(*r.corollary_value - *r.exact_to_uniform) > kCorollaryTolerance) {
        r.flags.emplace_back(flags::kCorollaryMismatch);
    }
    return r;
}

std::pair<VmfDistribution, VmfDistribution> grid_pair(int d, double kappa_q, double kappa_p,
                                                      double cos_theta) {
    if (!(cos_theta >= -1.0 && cos_theta <= 1.0)) {
        throw DomainError("cosine must lie in [-1, 1]");
    }
    if (d < 2) throw DomainError("dimension must be at least 2");
    std::vector<double> mu_p(static_cast<std::size_t>(d), 0.0);
    mu_p[0] = cos_theta;
    mu_p[1] = std::sqrt(std::max(0.0, (1.0 - cos_theta) * (1.0 + cos_theta)));
    return {VmfDistribution(UnitVector::axis(d, 0), kappa_q),
            VmfDistribution(UnitVector(std::move(mu_p)), kappa_p)};
}

std::vector<KlReport> audit_grid(const AuditGrid& grid, unsigned threads) {
    if (grid.dims.empty() || grid.kappas_q.empty() || grid.kappas_p.empty() ||
        grid.cosines.empty()) {
        throw DomainError("audit grid axes must all be nonempty");
    }
    for (double c : grid.cosines) {
        if (!(c >= -1.0 && c <= 1.0)) throw DomainError("audit grid cosines must lie in [-1, 1]");
    }

    std::vector<KlReport> rows;
    for (int d : grid.dims) {
        for (double kq : grid.kappas_q) {
            for (double kp : grid.kappas_p) {
                for (double c : grid.cosines) {
                    KlReport r;
                    r.d = d;
                    r.kappa_q = kq;
                    r.kappa_p = kp;
                    r.cos_theta = c;
                    rows.push_back(std::move(r));
                }
            }
        }
    }

    auto evaluate = [&](std::size_t i) {
        KlReport& row = rows[i];
        try {
            auto [q, p] = grid_pair(row.d, row.kappa_q, row.kappa_p, row.cos_theta);
            KlReport full = make_report(q, p, grid.n_mc, derive_seed(grid.seed, i));
            full.cos_theta = row.cos_theta;
            row = std::move(full);
        } catch (const std::exception& e) {
            row.error = e.what();
            row.flags.assign(1, flags::kError);
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(rows.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) evaluate(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < rows.size(); i = next++) evaluate(i);
            });
        }
    }
    return rows;
}

}  // namespace vmfkl
