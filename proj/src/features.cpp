#include "gbsk/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gbsk/error.hpp"
#include "gbsk/parallel.hpp"
#include "kahan.hpp"

namespace gbsk {

std::string_view to_string(CoarseGraining c) { return c == CoarseGraining::Orbit ? "orbit" : "meta"; }

std::string_view to_string(KernelKind k) { return k == KernelKind::Linear ? "linear" : "rbf"; }

void FeatureConfig::validate() const {
    if (k < 0) {
        throw Error(ErrorKind::OutOfRange, "k must be non-negative");
    }
    if (!(displacement >= 0.0) || !std::isfinite(displacement)) {
        throw Error(ErrorKind::OutOfRange, "displacement must be non-negative");
    }
    if (!(loss >= 0.0 && loss <= 1.0)) {
        throw Error(ErrorKind::OutOfRange, "loss must lie in [0, 1]");
    }
    if (!(rbf_delta > 0.0)) {
        throw Error(ErrorKind::OutOfRange, "rbf delta must be positive");
    }
}

std::size_t FeatureIndex::size() const {
    return coarse == CoarseGraining::Orbit ? orbits.size() : meta_orbits.size();
}

std::string FeatureIndex::label(std::size_t i) const {
    return coarse == CoarseGraining::Orbit ? orbits.at(i).label() : meta_orbits.at(i).label();
}

std::vector<std::string> FeatureIndex::labels() const {
    std::vector<std::string> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); i++) {
        out.push_back(label(i));
    }
    return out;
}

FeatureIndex feature_index(const FeatureConfig &cfg, std::size_t modes) {
    FeatureIndex idx;
    idx.coarse = cfg.coarse;
    idx.orbits = enumerate_orbits(cfg.k, modes);
    if (cfg.coarse == CoarseGraining::MetaOrbit) {
        idx.meta_orbits = enumerate_meta_orbits(cfg.k, modes);
    }
    return idx;
}

FeatureVector feature_vector(const ScaledGraph &g, const FeatureConfig &cfg, std::size_t jobs) {
    cfg.validate();
    if (static_cast<std::size_t>(cfg.k) > g.num_nodes()) {
        throw Error(ErrorKind::KExceedsModes,
                    "k = " + std::to_string(cfg.k) + " exceeds " + std::to_string(g.num_nodes()) + " modes");
    }
    if (cfg.loss > 0.0 && cfg.displacement > 0.0) {
        throw Error(ErrorKind::DisplacedLossUnsupported, "loss combined with displacement is not supported");
    }
    GbsEncoding e = encode(g, cfg.displacement);
    if (cfg.loss > 0.0) {
        e = apply_loss(e, cfg.loss);
    }
    return feature_vector(e, cfg, jobs);
}

FeatureVector feature_vector(const GbsEncoding &e, const FeatureConfig &cfg, std::size_t jobs) {
    cfg.validate();
    if (static_cast<std::size_t>(cfg.k) > e.modes()) {
        throw Error(ErrorKind::KExceedsModes,
                    "k = " + std::to_string(cfg.k) + " exceeds " + std::to_string(e.modes()) + " modes");
    }
    FeatureIndex idx = feature_index(cfg, e.modes());
    std::vector<double> orbit_p = orbit_probabilities(e, idx.orbits, jobs);

    FeatureVector fv;
    fv.config = cfg;
    fv.config.displacement = e.displacement();
    fv.config.loss = e.loss();
    KahanSum mass;
    for (double p : orbit_p) {
        mass.add(p);
    }
    fv.overflow = std::max(0.0, 1.0 - mass.value());

    if (cfg.coarse == CoarseGraining::Orbit) {
        fv.values = std::move(orbit_p);
        return fv;
    }
    std::vector<KahanSum> sums(idx.meta_orbits.size());
    for (std::size_t i = 0; i < idx.orbits.size(); i++) {
        const Orbit &o = idx.orbits[i];
        auto it = std::find_if(idx.meta_orbits.begin(), idx.meta_orbits.end(),
                               [&](const MetaOrbit &mo) { return mo.contains(o); });
        sums[static_cast<std::size_t>(it - idx.meta_orbits.begin())].add(orbit_p[i]);
    }
    fv.values.reserve(sums.size());
    for (const auto &s : sums) {
        fv.values.push_back(s.value());
    }
    return fv;
}

std::uint64_t required_samples(std::size_t d_features, double epsilon, double delta) {
    if (d_features < 1) {
        throw Error(ErrorKind::OutOfRange, "need at least one feature");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0)) {
        throw Error(ErrorKind::OutOfRange, "epsilon and delta must lie in (0, 1)");
    }
    double s = 2.0 * (std::numbers::ln2 * static_cast<double>(d_features) + std::log(1.0 / delta)) /
               (epsilon * epsilon);
    return static_cast<std::uint64_t>(std::ceil(s));
}

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed ^ mix64(stream * kGolden + 0x632BE59BD9B4E019ULL))) {}

std::uint64_t CounterRng::next() noexcept {
    counter_++;
    return mix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
    if (n <= 1) {
        return 0;
    }
    // rejection sampling keeps the draw unbiased
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return x % n;
}

CounterRng CounterRng::split(std::uint64_t stream) const {
    CounterRng r(0);
    r.key_ = mix64(key_ ^ mix64((stream + 1) * kGolden));
    return r;
}

SampleSet sample_events(const GbsEncoding &e, const FeatureConfig &cfg, std::size_t n_samples, std::uint64_t seed) {
    if (n_samples < 1) {
        throw Error(ErrorKind::OutOfRange, "need at least one sample");
    }
    FeatureVector exact = feature_vector(e, cfg);
    std::vector<double> cdf;
    cdf.reserve(exact.size() + 1);
    double acc = 0.0;
    for (double p : exact.values) {
        acc += std::max(0.0, p);
        cdf.push_back(acc);
    }
    acc += exact.overflow;
    cdf.push_back(acc);

    SampleSet out;
    out.config = exact.config;
    out.dimension = exact.size();
    out.outcomes.reserve(n_samples);
    CounterRng rng(seed);
    for (std::size_t s = 0; s < n_samples; s++) {
        double u = rng.uniform() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t k = std::min(static_cast<std::size_t>(it - cdf.begin()), out.dimension);
        out.outcomes.push_back(k);
    }
    return out;
}

FeatureVector features_from_weights(std::span<const double> weights, double overflow_weight,
                                    const FeatureConfig &cfg) {
    double total = overflow_weight;
    for (double w : weights) {
        total += w;
    }
    FeatureVector fv;
    fv.config = cfg;
    fv.values.assign(weights.begin(), weights.end());
    if (total > 0.0) {
        for (double &v : fv.values) {
            v /= total;
        }
        fv.overflow = overflow_weight / total;
    }
    return fv;
}

FeatureVector empirical_features(const SampleSet &samples, const FeatureConfig &cfg) {
    if (!(samples.config == cfg)) {
        throw Error(ErrorKind::ConfigMismatch, "samples were drawn under a different feature config");
    }
    std::vector<double> counts(samples.dimension, 0.0);
    double overflow = 0.0;
    for (std::size_t o : samples.outcomes) {
        if (o >= samples.dimension) {
            overflow += 1.0;
        } else {
            counts[o] += 1.0;
        }
    }
    return features_from_weights(counts, overflow, cfg);
}

double l1_distance(const FeatureVector &a, const FeatureVector &b) {
    if (a.size() != b.size()) {
        throw Error(ErrorKind::DimensionMismatch, "feature vectors differ in size");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); i++) {
        s += std::abs(a.values[i] - b.values[i]);
    }
    return s;
}

namespace {

void check_compatible(const FeatureVector &f1, const FeatureVector &f2) {
    if (f1.size() != f2.size()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "feature sizes " + std::to_string(f1.size()) + " and " + std::to_string(f2.size()) + " differ");
    }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); i++) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); i++) {
        s += a[i] * b[i];
    }
    return s;
}

double kernel_value(std::span<const double> a, std::span<const double> b, KernelKind kind, double delta) {
    if (kind == KernelKind::Linear) {
        return dot(a, b);
    }
    return std::exp(-squared_distance(a, b) / (2.0 * delta * delta));
}

}  // namespace

double linear_kernel(const FeatureVector &f1, const FeatureVector &f2) {
    check_compatible(f1, f2);
    return dot(f1.values, f2.values);
}

double rbf_kernel(const FeatureVector &f1, const FeatureVector &f2, double delta) {
    check_compatible(f1, f2);
    if (!(delta > 0.0)) {
        throw Error(ErrorKind::OutOfRange, "rbf delta must be positive");
    }
    return kernel_value(f1.values, f2.values, KernelKind::Rbf, delta);
}

Matrix gram_from_rows(const Matrix &rows, KernelKind kind, double delta, std::size_t jobs) {
    if (kind == KernelKind::Rbf && !(delta > 0.0)) {
        throw Error(ErrorKind::OutOfRange, "rbf delta must be positive");
    }
    const std::size_t n = rows.rows();
    Matrix g(n, n);
    parallel_for(n, jobs, [&](std::size_t i) {
        for (std::size_t j = i; j < n; j++) {
            g(i, j) = kernel_value(rows.row(i), rows.row(j), kind, delta);
        }
    });
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = 0; j < i; j++) {
            g(i, j) = g(j, i);
        }
    }
    return g;
}

GramMatrix gram_matrix(std::span<const FeatureVector> features, KernelKind kind, std::size_t jobs) {
    GramMatrix out;
    out.kind = kind;
    if (features.empty()) {
        return out;
    }
    out.config = features.front().config;
    const std::size_t d = features.front().size();
    Matrix rows(features.size(), d);
    for (std::size_t i = 0; i < features.size(); i++) {
        if (!(features[i].config == out.config)) {
            throw Error(ErrorKind::ConfigMismatch, "feature vectors were built with different configs");
        }
        check_compatible(features.front(), features[i]);
        std::copy(features[i].values.begin(), features[i].values.end(), rows.row(i).begin());
    }
    out.values = gram_from_rows(rows, kind, out.config.rbf_delta, jobs);
    return out;
}

Matrix standardized_rows(std::span<const FeatureVector> features) {
    if (features.empty()) {
        return {};
    }
    const std::size_t n = features.size();
    const std::size_t d = features.front().size();
    Matrix rows(n, d);
    for (std::size_t i = 0; i < n; i++) {
        check_compatible(features.front(), features[i]);
        std::copy(features[i].values.begin(), features[i].values.end(), rows.row(i).begin());
    }
    for (std::size_t j = 0; j < d; j++) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; i++) {
            mean += rows(i, j);
        }
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; i++) {
            var += (rows(i, j) - mean) * (rows(i, j) - mean);
        }
        double sd = std::sqrt(var / static_cast<double>(n));
        for (std::size_t i = 0; i < n; i++) {
            rows(i, j) = sd > 0.0 ? (rows(i, j) - mean) / sd : 0.0;
        }
    }
    return rows;
}

bool is_psd(const Matrix &m, double tol) { return min_eigenvalue(m) >= -tol; }

}  // namespace gbsk
