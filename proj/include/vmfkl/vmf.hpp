#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace vmfkl {

/// A point on the unit sphere S^{d-1}, d >= 2. The constructor rescales its
/// input to unit length and rejects vectors with norm below 1e-12.
class UnitVector {
public:
    explicit UnitVector(std::vector<double> coords);

    /// The standard basis vector e_{index} (zero-based) in R^dim.
    static UnitVector axis(int dim, int index);

    int dim() const { return static_cast<int>(coords_.size()); }
    std::span<const double> coords() const { return coords_; }
    double operator[](std::size_t i) const { return coords_[i]; }

    /// Inner product; throws DimensionMismatch.
    double dot(const UnitVector& other) const;

    /// Copy with `extra` zero coordinates appended.
    UnitVector padded(int extra = 1) const;

    bool operator==(const UnitVector&) const = default;

private:
    std::vector<double> coords_;
};

/// log c_d(kappa), the log normalizer of the VMF density with respect to the
/// surface measure on S^{d-1}. kappa == 0 gives minus the log sphere area.
double log_norm_const(int d, double kappa);

/// von Mises-Fisher distribution M_d(mu, kappa). Immutable.
class VmfDistribution {
public:
    VmfDistribution(UnitVector mu, double kappa);

    /// Uniform distribution on S^{dim-1} (kappa = 0, mean direction e_1).
    static VmfDistribution uniform(int dim);

    const UnitVector& mu() const { return mu_; }
    double kappa() const { return kappa_; }
    int dim() const { return mu_.dim(); }
    double log_norm() const { return log_norm_; }

    double d_star() const { return dim() / 2.0 - 1.0; }
    double d_diamond() const { return (dim() - 3) / 2.0; }
    double d_bullet() const { return (dim() - 1) / 2.0; }

    bool is_uniform() const { return kappa_ == 0.0; }

private:
    UnitVector mu_;
    double kappa_;
    double log_norm_;
};

double log_pdf(const VmfDistribution& dist, const UnitVector& x);

/// Same as log_pdf but for raw coordinates (no normalization check).
double log_pdf(const VmfDistribution& dist, std::span<const double> x);

/// A_d(kappa) = I_{d/2}(kappa) / I_{d/2-1}(kappa), so that E[x] = A_d(kappa) mu.
double mean_resultant_length(int d, double kappa);

/// Area of the Stiefel manifold of orthonormal r-frames in R^d:
///   2^r pi^{dr/2} / (pi^{r(r-1)/4} prod_{j=1}^{r} Gamma((d-j+1)/2)).
/// stiefel_area(d, 1) is the area of S^{d-1}. d = 1 is accepted (S^0 has two points).
double stiefel_area(int d, int r);
double log_stiefel_area(int d, int r);

struct SampleBatch {
    std::vector<UnitVector> points;
    std::uint64_t seed;
    VmfDistribution params;
    std::size_t n;
};

/// Points are generated in chunks of this size; chunk c draws from a
/// generator seeded with (seed XOR c). Serial and parallel sampling therefore
/// produce the same points in the same order.
inline constexpr std::size_t kSampleChunk = 4096;

/// Draws n points. Deterministic in (dist, n, seed).
SampleBatch sample(const VmfDistribution& dist, std::size_t n, std::uint64_t seed);

/// Same output as sample(), chunks distributed over `threads` workers.
SampleBatch sample_parallel(const VmfDistribution& dist, std::size_t n, std::uint64_t seed,
                            unsigned threads);

/// Streams n draws to `sink` without materializing a batch. Emits the same
/// draws as sample(), before UnitVector renormalization.
void generate(const VmfDistribution& dist, std::size_t n, std::uint64_t seed,
              const std::function<void(std::span<const double>)>& sink);

/// Empirical summary of a point cloud.
struct BatchSummary {
    std::size_t n = 0;
    std::vector<double> mean;          // sample mean vector
    double resultant_length = 0.0;     // |mean|
    double mean_cosine = 0.0;          // mean of mu . x
    double circular_std = 0.0;         // sqrt(-2 log resultant_length)
};

BatchSummary summarize(std::span<const UnitVector> points, const UnitVector& mu);

}  // namespace vmfkl

namespace vmfkl {

/// splitmix64 finalizer applied to seed + (index + 1) * golden-ratio increment.
/// Gives independent-looking seeds for numbered substreams (audit rows,
/// figure clouds) so results do not depend on evaluation order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace vmfkl
