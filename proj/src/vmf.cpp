#include "vmfkl/vmf.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "vmfkl/errors.hpp"
#include "vmfkl/special_functions.hpp"

namespace vmfkl {
namespace {

constexpr double kMinNorm = 1e-12;
constexpr long kMaxRejections = 10'000'000;

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

void check_dim(int d) { require(d >= 2, "dimension must be at least 2, got " + std::to_string(d)); }

void check_kappa(double kappa) {
    require(kappa >= 0.0 && std::isfinite(kappa), "concentration must be finite and >= 0");
}

// Draws the cosine w = mu . x, whose density on [-1, 1] is proportional to
// (1 - w^2)^{(d-3)/2} exp(kappa w), by Wood's rejection scheme with a
// Beta((d-1)/2, (d-1)/2) envelope.
class CosineSampler {
public:
    CosineSampler(int d, double kappa)
        : kappa_(kappa), dm1_(d - 1.0), gamma_(0.5 * (d - 1.0), 1.0) {
        b_ = dm1_ / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + dm1_ * dm1_));
        x0_ = (1.0 - b_) / (1.0 + b_);
        const double one_minus_x0_sq = 4.0 * b_ / ((1.0 + b_) * (1.0 + b_));
        c_ = kappa * x0_ + dm1_ * std::log(one_minus_x0_sq);
    }

    // Returns 1 - w, which keeps full precision when w is close to 1.
    template <class Rng>
    double draw_one_minus_w(Rng& rng) {
        for (long i = 0; i < kMaxRejections; ++i) {
            const double g1 = gamma_(rng);
            const double g2 = gamma_(rng);
            const double z = g1 / (g1 + g2);
            const double denom = 1.0 - (1.0 - b_) * z;
            const double one_minus_w = 2.0 * b_ * z / denom;
            const double w = 1.0 - one_minus_w;
            const double u = uniform_(rng);
            if (kappa_ * w + dm1_ * std::log(1.0 - x0_ * w) - c_ >= std::log(u)) {
                return one_minus_w;
            }
        }
        throw SamplerError("cosine rejection sampler exceeded its iteration cap");
    }

private:
    double kappa_;
    double dm1_;
    double b_ = 0.0;
    double x0_ = 0.0;
    double c_ = 0.0;
    std::gamma_distribution<double> gamma_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Householder reflection H = I - 2 v v' / (v'v) with v = e_1 - mu, so H e_1 = mu.
class FrameRotation {
public:
    explicit FrameRotation(const UnitVector& mu) : v_(mu.coords().begin(), mu.coords().end()) {
        for (double& x : v_) x = -x;
        v_[0] += 1.0;
        double vv = 0.0;
        for (double x : v_) vv += x * x;
        identity_ = vv < 1e-30;
        scale_ = identity_ ? 0.0 : 2.0 / vv;
    }

    void apply(std::span<double> x) const {
        if (identity_) return;
        double vx = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) vx += v_[i] * x[i];
        const double k = scale_ * vx;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= k * v_[i];
    }

private:
    std::vector<double> v_;
    bool identity_ = true;
    double scale_ = 0.0;
};

void generate_chunk(const VmfDistribution& dist, std::size_t count, std::uint64_t chunk_seed,
                    const std::function<void(std::span<const double>)>& sink) {
    const int d = dist.dim();
    std::mt19937_64 rng(chunk_seed);
    CosineSampler cosine(d, dist.kappa());
    std::normal_distribution<double> normal(0.0, 1.0);
    const FrameRotation rotation(dist.mu());
    std::vector<double> x(static_cast<std::size_t>(d));

    for (std::size_t i = 0; i < count; ++i) {
        const double one_minus_w = cosine.draw_one_minus_w(rng);
        const double w = 1.0 - one_minus_w;
        const double radial = std::sqrt(std::max(0.0, one_minus_w * (2.0 - one_minus_w)));

        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (int j = 1; j < d; ++j) {
                x[static_cast<std::size_t>(j)] = normal(rng);
                norm2 += x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
            }
        } while (norm2 == 0.0);
        const double tangent_scale = radial / std::sqrt(norm2);
        x[0] = w;
        for (int j = 1; j < d; ++j) x[static_cast<std::size_t>(j)] *= tangent_scale;

        rotation.apply(x);
        sink(x);
    }
}

std::size_t chunk_count(std::size_t n) { return (n + kSampleChunk - 1) / kSampleChunk; }

std::size_t chunk_size(std::size_t n, std::size_t chunk) {
    return std::min(kSampleChunk, n - chunk * kSampleChunk);
}

}  // namespace

UnitVector::UnitVector(std::vector<double> coords) : coords_(std::move(coords)) {
    require(coords_.size() >= 2, "unit vector needs at least 2 coordinates");
    double norm2 = 0.0;
    for (double x : coords_) {
        require(std::isfinite(x), "unit vector coordinates must be finite");
        norm2 += x * x;
    }
    const double norm = std::sqrt(norm2);
    require(norm >= kMinNorm, "cannot normalize a (near) zero vector");
    // Leave already-normalized input untouched so renormalizing is idempotent.
    if (std::abs(norm - 1.0) > 2.0 * std::numeric_limits<double>::epsilon())
        for (double& x : coords_) x /= norm;
}

UnitVector UnitVector::axis(int dim, int index) {
    require(dim >= 2 && index >= 0 && index < dim, "axis index out of range");
    std::vector<double> c(static_cast<std::size_t>(dim), 0.0);
    c[static_cast<std::size_t>(index)] = 1.0;
    return UnitVector(std::move(c));
}

double UnitVector::dot(const UnitVector& other) const {
    if (other.dim() != dim()) {
        throw DimensionMismatch("dot product of vectors with dimensions " + std::to_string(dim()) +
                                " and " + std::to_string(other.dim()));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < coords_.size(); ++i) s += coords_[i] * other.coords_[i];
    return s;
}

UnitVector UnitVector::padded(int extra) const {
    std::vector<double> c = coords_;
    c.resize(c.size() + static_cast<std::size_t>(std::max(extra, 0)), 0.0);
    return UnitVector(std::move(c));
}

double log_norm_const(int d, double kappa) {
    check_dim(d);
    check_kappa(kappa);
    const double half_d = 0.5 * d;
    if (kappa == 0.0) {
        return log_gamma(half_d) - std::numbers::ln2 - half_d * std::log(std::numbers::pi);
    }
    const double order = half_d - 1.0;
    return order * std::log(kappa) - half_d * std::log(2.0 * std::numbers::pi) -
           log_bessel_i(order, kappa).value;
}

VmfDistribution::VmfDistribution(UnitVector mu, double kappa)
    : mu_(std::move(mu)), kappa_(kappa), log_norm_(log_norm_const(mu_.dim(), kappa)) {}

VmfDistribution VmfDistribution::uniform(int dim) {
    check_dim(dim);
    return VmfDistribution(UnitVector::axis(dim, 0), 0.0);
}

double log_pdf(const VmfDistribution& dist, std::span<const double> x) {
    if (static_cast<int>(x.size()) != dist.dim()) {
        throw DimensionMismatch("log_pdf: point has dimension " + std::to_string(x.size()) +
                                ", distribution has " + std::to_string(dist.dim()));
    }
    const auto mu = dist.mu().coords();
    double proj = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) proj += mu[i] * x[i];
    return dist.log_norm() + dist.kappa() * proj;
}

double log_pdf(const VmfDistribution& dist, const UnitVector& x) {
    return log_pdf(dist, x.coords());
}

double mean_resultant_length(int d, double kappa) {
    check_dim(d);
    check_kappa(kappa);
    if (kappa == 0.0) return 0.0;
    return std::exp(log_bessel_i(0.5 * d, kappa).value - log_bessel_i(0.5 * d - 1.0, kappa).value);
}

double log_stiefel_area(int d, int r) {
    require(d >= 1 && r >= 1 && r <= d, "stiefel_area: need 1 <= r <= d");
    const double log_pi = std::log(std::numbers::pi);
    double out = r * std::numbers::ln2 + 0.5 * d * r * log_pi - 0.25 * r * (r - 1) * log_pi;
    for (int j = 1; j <= r; ++j) out -= log_gamma(0.5 * (d - j + 1));
    return out;
}

double stiefel_area(int d, int r) { return std::exp(log_stiefel_area(d, r)); }

void generate(const VmfDistribution& dist, std::size_t n, std::uint64_t seed,
              const std::function<void(std::span<const double>)>& sink) {
    for (std::size_t c = 0; c < chunk_count(n); ++c) {
        generate_chunk(dist, chunk_size(n, c), seed ^ static_cast<std::uint64_t>(c), sink);
    }
}

SampleBatch sample(const VmfDistribution& dist, std::size_t n, std::uint64_t seed) {
    return sample_parallel(dist, n, seed, 1);
}

SampleBatch sample_parallel(const VmfDistribution& dist, std::size_t n, std::uint64_t seed,
                            unsigned threads) {
    require(n >= 1, "sample: n must be positive");
    const std::size_t chunks = chunk_count(n);
    std::vector<std::vector<UnitVector>> parts(chunks);

    auto run_chunk = [&](std::size_t c) {
        auto& out = parts[c];
        out.reserve(chunk_size(n, c));
        generate_chunk(dist, chunk_size(n, c), seed ^ static_cast<std::uint64_t>(c),
                       [&out](std::span<const double> x) {
                           out.emplace_back(std::vector<double>(x.begin(), x.end()));
                       });
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
    if (workers == 1) {
        for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (unsigned t = 0; t < workers; ++t) {
                pool.emplace_back([&, t] {
                    try {
                        for (std::size_t c = t; c < chunks; c += workers) run_chunk(c);
                    } catch (...) {
                        errors[t] = std::current_exception();
                    }
                });
            }
        }
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    std::vector<UnitVector> points;
    points.reserve(n);
    for (auto& part : parts) {
        for (auto& p : part) points.push_back(std::move(p));
    }
    return {std::move(points), seed, dist, n};
}

BatchSummary summarize(std::span<const UnitVector> points, const UnitVector& mu) {
    BatchSummary s;
    s.n = points.size();
    s.mean.assign(static_cast<std::size_t>(mu.dim()), 0.0);
    if (points.empty()) return s;
    double cos_sum = 0.0;
    for (const auto& p : points) {
        const auto c = p.coords();
        for (std::size_t i = 0; i < c.size(); ++i) s.mean[i] += c[i];
        cos_sum += mu.dot(p);
    }
    double norm2 = 0.0;
    for (double& m : s.mean) {
        m /= static_cast<double>(s.n);
        norm2 += m * m;
    }
    s.resultant_length = std::sqrt(norm2);
    s.mean_cosine = cos_sum / static_cast<double>(s.n);
    s.circular_std = std::sqrt(-2.0 * std::log(s.resultant_length));
    return s;
}

}  // namespace vmfkl

namespace vmfkl {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace vmfkl
