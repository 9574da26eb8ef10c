#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vmfkl/vmf.hpp"

namespace vmfkl {

/// KL(q || p) in closed form:
///   log c_d(kq) - log c_d(kp) + (kq - kp mu_p.mu_q) A_d(kq).
/// Throws DimensionMismatch when q and p live on different spheres.
double kl_exact(const VmfDistribution& q, const VmfDistribution& p);

struct Theorem1Bound {
    double bound;
    std::optional<int> padded_dim;  // set when an even d was lifted to d + 1
};

/// Evaluates the closed-form upper-bound expression for KL(q || p) stated
/// for odd d:
///
///   kq - kp mu_p.mu_q + d_bullet log kq + sum_{m=1}^{d_diamond} kq^m / m!
///     - ((d^2 - 2d + 1) / 4) log kp + d_diamond (d_diamond + 1) log d_diamond
///     - d_diamond^2 + 1
///
/// with d_diamond = (d-3)/2, d_bullet = (d-1)/2 and 0 log 0 = 0. Even d is
/// padded with one null coordinate first. Whether the value really bounds
/// kl_exact is left to audit_grid. Requires kq > 0 and kp > 0.
Theorem1Bound kl_bound_theorem1(const VmfDistribution& q, const VmfDistribution& p);

/// kq - (d/2 - 1) log 2: the closed form claimed for KL against a uniform prior.
double kl_uniform_prior_corollary(const VmfDistribution& q);

/// KL(q || uniform) = kq A_d(kq) + log c_d(kq) + log |S^{d-1}|.
double kl_exact_to_uniform(const VmfDistribution& q);

struct McEstimate {
    double estimate;
    double std_error;
};

/// Monte Carlo mean of log q(x) - log p(x) over n draws from q, with its
/// standard error. Deterministic in seed. Requires n >= 2.
McEstimate mc_kl_estimate(const VmfDistribution& q, const VmfDistribution& p, std::size_t n,
                          std::uint64_t seed);

namespace flags {
inline constexpr const char* kBoundBelowExact = "bound_below_exact";
inline constexpr const char* kCorollaryMismatch = "corollary_mismatch";
inline constexpr const char* kError = "error";
}  // namespace flags

// Corollary rows are flagged when they differ from the exact uniform-prior KL by more than this.
inline constexpr double kCorollaryTolerance = 1e-9;

struct KlReport {
    // Grid coordinates of the row.
    int d = 0;
    double kappa_q = 0.0;
    double kappa_p = 0.0;
    double cos_theta = 0.0;

    std::optional<VmfDistribution> q;
    std::optional<VmfDistribution> p;

    double exact = 0.0;
    std::optional<double> theorem1_bound;
    std::optional<int> padded_dim;
    std::optional<double> corollary_value;     // only when kappa_p == 0
    std::optional<double> exact_to_uniform;    // only when kappa_p == 0
    std::optional<double> mc_estimate;
    std::optional<double> mc_stderr;

    std::vector<std::string> flags;
    std::string error;  // non-empty when the row could not be evaluated

    bool has_flag(const std::string& f) const;
};

/// Fills every KlReport field for one (q, p) pair. n_mc < 2 skips the Monte
/// Carlo columns.
KlReport make_report(const VmfDistribution& q, const VmfDistribution& p, std::size_t n_mc,
                     std::uint64_t seed);

struct AuditGrid {
    std::vector<int> dims;
    std::vector<double> kappas_q;
    std::vector<double> kappas_p;
    std::vector<double> cosines;
    std::size_t n_mc = 0;
    std::uint64_t seed = 0;
};

/// The pair used for a grid point: mu_q = e_1, mu_p = cos e_1 + sin e_2.
std::pair<VmfDistribution, VmfDistribution> grid_pair(int d, double kappa_q, double kappa_p,
                                                      double cos_theta);

/// One KlReport per grid point, in row-major order over (dims, kappas_q,
/// kappas_p, cosines). Row i samples with derive_seed(grid.seed, i), so rows
/// may be evaluated on `threads` workers without changing the output.
/// Row failures are recorded in the row and do not abort the grid.
std::vector<KlReport> audit_grid(const AuditGrid& grid, unsigned threads = 1);

}  // namespace vmfkl
