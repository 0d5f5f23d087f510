#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gbsk/dataset.hpp"
#include "gbsk/distribution.hpp"
#include "gbsk/features.hpp"
#include "gbsk/graph.hpp"
#include "gbsk/linalg.hpp"

namespace gbsk {

struct SvmOptions {
    /// Stop once the maximal KKT violation m(a) - M(a) drops below tol.
    double tol = 1e-3;
    std::size_t max_iterations = 10'000'000;
    /// Check the Gram matrix for positive semi-definiteness first.
    bool check_psd = true;
    double psd_tol = 1e-8;
};

/// Binary C-SVM on a precomputed kernel. Labels are +1 / -1.
struct SvmModel {
    std::vector<double> alpha;
    std::vector<int> labels;
    double bias = 0.0;
    double c_penalty = 0.0;
    std::size_t iterations = 0;

    /// sum_i alpha_i y_i K(x_i, x) + bias, with k_row[i] = K(x_i, x).
    double decision(std::span<const double> k_row) const;
};

/// Dual C-SVM by sequential minimal optimization with maximal-violating-pair
/// working set selection. Throws NotPsd, DegenerateLabels (one class only),
/// OutOfRange (labels not +-1, c <= 0) and NotConverged.
SvmModel svm_train(const Matrix &gram, std::span<const int> labels, double c_penalty, const SvmOptions &options = {});

/// Multi-class wrapper: a single SVM for two classes, one-vs-rest otherwise.
/// Prediction takes the class with the largest decision value, ties going to
/// the lowest class id. A training set with one class predicts that class.
struct KernelClassifier {
    std::vector<int> classes;  // ascending
    std::vector<SvmModel> models;

    /// cross(i, j) = K(test_i, train_j)
    std::vector<int> predict(const Matrix &cross) const;
};

KernelClassifier train_classifier(const Matrix &gram, std::span<const int> labels, double c_penalty,
                                  const SvmOptions &options = {});

/// n points spaced logarithmically over [lo, hi], ascending.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

struct CvProtocol {
    std::size_t outer_folds = 10;
    std::size_t inner_folds = 10;
    std::size_t repeats = 10;
    std::vector<double> c_grid = log_grid(1e-4, 1e3, 8);
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    SvmOptions svm;
};

/// Fold id per sample. Each class is shuffled (Fisher-Yates) and dealt
/// round-robin, continuing across classes in ascending class order. A pure
/// function of (labels, folds, rng state).
std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::size_t folds, CounterRng rng);

struct CvResult {
    double mean = 0.0;
    /// Sample standard deviation over repeats; 0 for a single repeat.
    double stddev = 0.0;
    std::vector<double> repeat_accuracies;
    /// [repeat][outer fold]
    std::vector<std::vector<double>> fold_accuracies;
    /// [repeat][outer fold]
    std::vector<std::vector<double>> selected_c;
};

/// Double cross-validation on a precomputed Gram matrix: the inner loop picks
/// C by pooled inner accuracy (ties to the smallest C), the outer loop scores
/// the refit model. A repeat's accuracy is pooled over its outer folds.
/// Throws TooFewGraphs (< 20), DegenerateLabels, NotPsd.
CvResult cross_validate_gram(const Matrix &gram, std::span<const int> labels, const CvProtocol &protocol);

struct BenchOptions {
    KernelKind kernel = KernelKind::Rbf;
    bool standardize = false;
};

/// Features for every graph of the bundle, Gram matrix, then
/// cross_validate_gram().
CvResult double_cross_validate(const DatasetBundle &bundle, const FeatureConfig &cfg, const CvProtocol &protocol,
                               const BenchOptions &options = {});

/// Gram matrix the benchmark would use for this bundle.
Matrix bundle_gram(const DatasetBundle &bundle, const FeatureConfig &cfg, const BenchOptions &options,
                   std::size_t jobs = 1);

/// JSON run record: dataset, configuration, protocol choices, mean, std and
/// per-fold accuracies.
std::string cv_report(const std::string &dataset, const FeatureConfig &cfg, const BenchOptions &options,
                      const CvProtocol &protocol, const CvResult &result);

/// Non-isomorphic graphs on s nodes (isolated nodes allowed), ordered by edge
/// count and then by canonical edge mask. Sizes 3, 4 and 5 only.
std::size_t graphlet_class_count(std::size_t s);

/// Counts of induced subgraphs per isomorphism class, concatenated over
/// `sizes` in the given order. Any nonzero weight is an edge. Throws
/// UnsupportedSize.
std::vector<double> graphlet_count_features(const Graph &g, std::span<const std::size_t> sizes);

/// sum over events n of a single-photon orbit of (weighted perfect matchings
/// of the induced subgraph)^2 c^|n|, by backtracking enumeration only.
/// Equals orbit_probability * sqrt(det Q) for the pure undisplaced state.
/// Throws NotSinglePhotonOrbit.
double gbs_feature_as_squared_matchings(const ScaledGraph &g, const Orbit &o);

}  // namespace gbsk
