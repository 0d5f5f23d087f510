#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gbsk/distribution.hpp"
#include "gbsk/encoding.hpp"
#include "gbsk/graph.hpp"
#include "gbsk/linalg.hpp"

namespace gbsk {

enum class CoarseGraining { Orbit, MetaOrbit };

std::string_view to_string(CoarseGraining c);

struct FeatureConfig {
    int k = 6;
    double displacement = 0.0;
    CoarseGraining coarse = CoarseGraining::Orbit;
    double loss = 0.0;
    double rbf_delta = 1.0;

    /// Throws OutOfRange on k < 0, negative displacement, loss outside
    /// [0, 1] or non-positive rbf_delta.
    void validate() const;

    bool operator==(const FeatureConfig &) const = default;
};

/// Ordered feature descriptors. The size depends on (k, coarse) only once
/// k does not exceed the number of modes.
struct FeatureIndex {
    CoarseGraining coarse = CoarseGraining::Orbit;
    std::vector<Orbit> orbits;
    std::vector<MetaOrbit> meta_orbits;

    std::size_t size() const;
    std::string label(std::size_t i) const;
    std::vector<std::string> labels() const;
};

FeatureIndex feature_index(const FeatureConfig &cfg, std::size_t modes);

struct FeatureVector {
    std::vector<double> values;
    FeatureConfig config;
    /// Probability of more than k photons, excluded from `values`.
    double overflow = 0.0;

    std::size_t size() const noexcept { return values.size(); }
};

/// Exact (meta-)orbit probabilities of g. Throws KExceedsModes if k > M and
/// DisplacedLossUnsupported if both displacement and loss are set.
FeatureVector feature_vector(const ScaledGraph &g, const FeatureConfig &cfg, std::size_t jobs = 1);

/// Same, starting from an existing encoding (its displacement and loss win
/// over the ones in cfg).
FeatureVector feature_vector(const GbsEncoding &e, const FeatureConfig &cfg, std::size_t jobs = 1);

/// Samples needed so that the L1 error of D empirical frequencies exceeds
/// epsilon with probability at most delta: ceil(2 (ln2 D + ln(1/delta)) / eps^2).
std::uint64_t required_samples(std::size_t d_features, double epsilon, double delta);

/// Splittable counter-based generator (SplitMix64 over a keyed counter).
/// Output depends only on (seed, stream, position), on every platform.
class CounterRng {
   public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next() noexcept;
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) noexcept;
    CounterRng split(std::uint64_t stream) const;

   private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Drawn outcomes; an outcome equal to `dimension` is the overflow bucket.
struct SampleSet {
    FeatureConfig config;
    std::size_t dimension = 0;
    std::vector<std::size_t> outcomes;

    std::size_t overflow_outcome() const noexcept { return dimension; }
};

/// I.i.d. draws from the exact categorical distribution over the feature
/// classes plus overflow, by inverse CDF. Deterministic given the seed.
SampleSet sample_events(const GbsEncoding &e, const FeatureConfig &cfg, std::size_t n_samples, std::uint64_t seed);

/// Relative frequencies over the feature index; overflow frequency is
/// reported in FeatureVector::overflow. Throws ConfigMismatch.
FeatureVector empirical_features(const SampleSet &samples, const FeatureConfig &cfg);

/// Normalizes non-negative class weights (features plus overflow) into a
/// FeatureVector.
FeatureVector features_from_weights(std::span<const double> weights, double overflow_weight,
                                    const FeatureConfig &cfg);

double l1_distance(const FeatureVector &a, const FeatureVector &b);

enum class KernelKind { Linear, Rbf };

std::string_view to_string(KernelKind k);

struct GramMatrix {
    Matrix values;
    KernelKind kind = KernelKind::Linear;
    FeatureConfig config;
};

double linear_kernel(const FeatureVector &f1, const FeatureVector &f2);
double rbf_kernel(const FeatureVector &f1, const FeatureVector &f2, double delta);

/// Pairwise kernel values; rbf uses config.rbf_delta. Throws ConfigMismatch
/// when feature configs differ and DimensionMismatch on size mismatch.
GramMatrix gram_matrix(std::span<const FeatureVector> features, KernelKind kind, std::size_t jobs = 1);

/// Gram matrix from raw feature rows (one row per graph).
Matrix gram_from_rows(const Matrix &rows, KernelKind kind, double delta, std::size_t jobs = 1);

/// Feature rows standardized column-wise to zero mean and unit variance.
/// Constant columns become zero.
Matrix standardized_rows(std::span<const FeatureVector> features);

/// Smallest eigenvalue >= -tol.
bool is_psd(const Matrix &m, double tol = 1e-8);

}  // namespace gbsk
